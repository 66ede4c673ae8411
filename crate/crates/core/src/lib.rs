pub mod deriv_solver;
pub mod exact;
pub mod lie_structure;
pub mod nary_algebra;
pub mod theorems;
