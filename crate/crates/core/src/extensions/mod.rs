//! Surface-by-free and surface-by-surface extensions given by monodromy data:
//! excessive homology, searches over cover lattices, and torsion.

mod element;
mod homology;
pub mod lattice;
mod spec;

pub use element::ExtensionElement;
pub use homology::{
    build_pi, build_pi_amalgam, cell_homology, excessive_homology, p_torsion_search,
    torus_base_check, virtual_excessive_search, CellHomology, CoverSearchEntry, CoverSearchReport,
    HomologyReport, TorsionEntry, TorsionReport, TorsionVerdict, Verdict,
};
pub use lattice::{BaseCover, BaseCoverKind};
pub use spec::{BaseGroup, Monodromy, MonodromySpec};
