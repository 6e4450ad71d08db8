//! Mahler discrete residues, the reductions that produce them, and the
//! summability report.

mod infinity;
mod report;
mod tree;
mod verify;

pub use infinity::{dres_infinity, reduce_infinity, trajectory_height, ResidueAtInfinity};
pub use report::{mahler_report, residue_at_infinity, Decomposition, MahlerReport, VerificationRoute};
pub use tree::{cyclic_d, cyclic_l, hat_c, hat_d, reduce_tree, CyclicTable, Table, TreeReduction, TreeResidues};
pub use verify::{delta_pf, sigma_pf};
