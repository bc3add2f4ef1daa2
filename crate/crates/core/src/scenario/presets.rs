use super::{ChannelSpec, CouplingSpec, Grid, OracleSettings, Scenario};
use crate::onechannel::Family;

fn beta(b: f64) -> Family {
    Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: b }
}

fn scenario(name: &str, a: Family, b: Family, kappa: f64, q: f64, x: f64) -> Scenario {
    Scenario {
        name: name.into(),
        channels: vec![ChannelSpec::from_family(&a), ChannelSpec::from_family(&b)],
        coupling: CouplingSpec::pair(kappa, q, x),
        k_grid: Grid::linear(1e-3, 10.0, 400),
        r_grid: Grid::linear(0.01, 10.0, 400),
        outputs: vec![],
        override_physics_checks: false,
        oracle: OracleSettings::default(),
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &["fig1-trivial", "fig2-ss", "fig3-ss-dashed", "fig4-sp", "fig5-sd", "ntc1"]
}

/// Built-in parameter sets of the worked examples.
pub fn preset(name: &str) -> Option<Scenario> {
    let cosech = |kappa| Family::Cosech { kappa };
    Some(match name {
        "fig1-trivial" => scenario(name, beta(-2.0), beta(-1.5), 6.0, 0.5, 25.0),
        "fig2-ss" => scenario(name, cosech(1.5), cosech(1.0), 29.0 / 7.0, 0.4, 15.0),
        "fig3-ss-dashed" => scenario(name, cosech(1.5), cosech(1.0), 13.6667, 1.2, 15.0),
        "fig4-sp" => scenario(name, Family::SpS { kappa0: 1.5, kappa1: 1.75 }, Family::Centrifugal { l: 1 }, 3.53, 1.0, 1.0),
        "fig5-sd" => scenario(name, Family::SdS { kappas: [1.0, 1.5, 1.75, 2.0] }, Family::SdD { kappa: 3.0 }, 5.53, 1.0, 15.0),
        "ntc1" => scenario(name, beta(-2.0), beta(-1.0), 6.0, 0.5, 25.0),
        _ => return None,
    })
}
