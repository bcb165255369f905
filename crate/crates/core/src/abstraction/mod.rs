//! Predicate abstraction over expectations: cubes, the `cubed` operator,
//! the abstract transformer `wp_Φ`, and the information-preservation and
//! data-independence checks built on them.

mod di;
mod ip;
mod partition;

pub use di::{check_data_independent, di_predicates};
pub use ip::{
    check_info_preserving, recheck_witness, AbstractionError, ComponentReport, CubeCheck, IpReport, IpVerdict,
    PredicateCheck, StateDiff, Witness,
};
pub use partition::{cubed, cubes, is_cubed, wp_abs, Cube, NamedPredicate, Partition, PredicateSet};
