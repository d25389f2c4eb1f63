//! Symbol toolkit for three-gluon form factors: keys, dihedral symmetry,
//! trivial zeros, linear relations, quad compression, datasets and scoring.

pub mod builtin;
pub mod coefficient;
pub mod datasets;
pub mod dihedral;
pub mod error;
pub mod eval;
pub mod io;
pub mod key;
pub mod letter;
pub mod quad;
pub mod relations;
pub mod rng;
pub mod symbol;
pub mod tokens;
#[cfg(any(test, feature = "test-support"))]
pub mod testing;
pub mod zeros;

pub use builtin::builtin_symbol;
pub use coefficient::{Coefficient, Sign};
pub use dihedral::{canonical, cycle, dihedral_orbit, flip, Dihedral};
pub use error::{Error, KeyErrorKind, Result};
pub use key::{format_key, parse_key, Key, MAX_KEY_LEN, MAX_LOOP};
pub use letter::Letter;
pub use quad::{expand_quad, quad_stats, to_quad, Expansion, QuadStats, QuadSuffix, QuadSymbol};
pub use relations::{catalog, relation, Relation, RelationInstance, RelationScore};
pub use symbol::{BuildReport, Symbol, SymbolBuilder};
pub use tokens::{decode_coefficient, encode_coefficient, SignPosition, Token};
pub use zeros::{count_valid_keys, is_trivial_zero, valid_keys, ValidKeySampler};
pub use eval::{score_predictions, Metrics};
pub use io::{read_symbol, write_symbol, Prediction, SymbolFormat};
