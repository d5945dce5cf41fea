//! Interval partitions, test-point selection (β) and extrapolation (η).

mod border;
mod ground;
mod pick;

pub use border::{
    check_partition_laws, interval_endpoints, interval_partition, Border, Ext, Interval, MalformedBorderSet, Shape,
};
pub use ground::{atom_domains, clause_domains, well_typed_groundings, Groundings, Item};
pub use pick::{
    eta_complete_for, integer_pick, non_integer_pick, pick_test_points, Extrapolation, ExtrapolationFn, Part,
    PickOptions, TestPointFn,
};
