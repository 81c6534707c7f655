//! Context-free recognition with Earley's algorithm and its suffix-item
//! variant, instrumented with exact elementary-step counts and table sizes.
//!
//! * [`grammar`] and [`text`]: the grammar model and file formats
//! * [`earley`]: the dotted-item recognizer (table `E`)
//! * [`variant`]: the suffix-item recognizer (array `U`, table `T`)
//! * [`tau2`]: the two-normal-form cover transformation
//! * [`oracle`]: brute-force derivability, language enumeration, parse
//!   counting and table audits
//! * [`sentgen`]: seeded random sentences
//! * [`bench`]: comparison rows and reports

pub mod agenda;
pub mod bench;
pub mod earley;
pub mod grammar;
pub mod oracle;
pub mod sentgen;
pub mod tau2;
pub mod text;
pub mod variant;

pub use agenda::{AgendaOrder, RecognizeOptions};
pub use earley::{
    chart_query, recognize_earley, recognize_earley_with, EarleyChart, EarleyStats, RecognizeError,
};
pub use grammar::{
    dotted_items, suffix_items, DottedItem, Grammar, GrammarBuilder, GrammarError, InputError,
    ProdId, Production, SuffixId, SuffixItem, Symbol, SymbolId, SymbolKind,
};
pub use tau2::tau2_transform;
pub use text::{parse_grammar, serialize_grammar};
pub use variant::{
    backward_query, forward_query, recognize_variant, recognize_variant_with, BackwardTable,
    ForwardArray, VariantStats,
};
