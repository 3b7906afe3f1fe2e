//! Exact linear programming over matroid polytopes.

pub mod colgen;
pub mod lpmat;
pub mod num;
pub mod polytope;
pub mod simplex;

pub use lpmat::{solve_lp_mat, ExtremePoint, LpMatInstance, LpMatOutcome, SideMatroid};
pub use polytope::{find_tight_set, in_matroid_polytope, separate_matroid_polytope};
pub use simplex::{LinearProgram, LpOutcome, Sense};
