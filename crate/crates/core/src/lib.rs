//! Weighted shapetiling of squares by rational rectangular tiles.
//!
//! Tiles are encoded as generalized Laurent polynomials; translation becomes
//! monomial multiplication and rescaling becomes exponent scaling. On top of
//! that encoding the crate decides whether a tile shapetiles a square with
//! rational or integer weights, searches for explicit certificates with exact
//! linear algebra, and verifies certificates as polynomial identities.

pub mod certify;
pub mod decide;
pub mod format;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod render;
pub mod slope;
pub mod tiles;

pub use certify::{
    raster_check, search_q, search_tile, search_weight_w, search_z, verify_certificate,
    Certificate, CertifyError, CheckOutcome, Placement, SearchBounds, SearchError, SearchMode,
    SearchOptions,
};
pub use decide::{decide_q, decide_z, DecideError, Question, Verdict, Witness};
pub use format::ParseError;
pub use poly::{square_poly, ExponentPair, LaurentPoly, PolyError, UniLaurentPoly};
pub use rational::Rational;
pub use render::{render_certificate, RenderOptions};
pub use slope::{
    condition2_check, relevant_slopes, slope_decompose, Slope, SlopeError, SlopeReport,
};
pub use tiles::{CornerForm, LatticeForm, LatticeTile, Rect, TileError, WeightedTile};
