pub mod algebra;
pub mod derivations;
pub mod dsl;
pub mod exactnum;
pub mod group;
pub mod tpstruct;
