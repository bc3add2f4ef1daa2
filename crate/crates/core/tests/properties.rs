mod support;

macro_rules! properties {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = support::$name() {
                    panic!("{e}");
                }
            }
        )*
    };
}

properties!(
    hankel_asymptotics,
    hankel_derivative,
    hankel_wronskian,
    channel_wronskian,
    radial_equation,
    s_unitary_and_diagonalized,
    potential_symmetric,
    determinant_n2,
    determinant_n3,
    determinant_n4,
    canonical_symmetry,
    scenario_round_trip,
);

#[test]
fn registry_lists_each_property_once() {
    let mut names: Vec<&str> = support::ALL.iter().map(|(n, _)| *n).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), 12);
}
