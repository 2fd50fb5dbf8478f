use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("undeclared symbol `{0}`")]
    Undeclared(String),

    #[error("arity mismatch for `{name}`: declared with {expected} argument(s), used with {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("variable `{0}` is bound twice in the same set comprehension")]
    DuplicateBound(String),

    #[error("symbol `{0}` is used both as {1} and as {2}")]
    SymbolClash(String, &'static str, &'static str),

    #[error("domain bound exceeded while building {bound}: {size} values > cap {cap}; lower the bound or raise the cap")]
    Explosion { bound: String, size: u128, cap: usize },

    #[error("evaluable function `{0}` has no declared range; declare it with `#function {0} : {{...}}.`")]
    MissingRange(String),

    #[error("not a GZ theory: {0}")]
    NotGz(String),

    #[error("bad atom selector: {0}")]
    Selector(String),

    #[error("invalid bounds: {0}")]
    Bounds(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}
