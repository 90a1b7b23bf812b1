pub mod affine;
pub mod cells;
pub mod error;
pub mod linalg;
pub mod rootsys;
pub mod schemes;
pub mod snf;
pub mod weyl;
pub mod wonderful;

pub use affine::{AffineRoot, AffineWeylElement, Generator};
pub use cells::{Cell, CellDecomposition};
pub use error::{Error, Result};
pub use rootsys::{CartanType, Coweight, FundamentalGroupElement, Root, RootId, RootSystem, Weight};
pub use schemes::{search, DegreeMode, ModificationScheme, SchemeEntry, SchemeFile, SchemeReport, Verdict};
pub use weyl::WeylElement;
pub use wonderful::{KillingData, Side, TangentMap, TorusPoint};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/roots.md")]
    mod roots {}
    #[doc = include_str!("../../../book/src/weyl.md")]
    mod weyl {}
    #[doc = include_str!("../../../book/src/affine.md")]
    mod affine {}
    #[doc = include_str!("../../../book/src/cells.md")]
    mod cells {}
    #[doc = include_str!("../../../book/src/wonderful.md")]
    mod wonderful {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
