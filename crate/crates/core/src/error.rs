use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("label `{0}` is used twice")]
    LabelCollision(String),
    #[error("loop at `{0}`")]
    Loop(String),
    #[error("parallel edge `{0}`-`{1}`")]
    ParallelEdge(String, String),
    #[error("simplex {0:?} is not in the ambient complex")]
    NotSubcomplex(Vec<String>),
    #[error("image {0:?} of a simplex is not a simplex")]
    NotSimplicial(Vec<String>),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("`{0}` and `{1}` are not adjacent in the link")]
    NotAdjacent(String, String),
    #[error("marking is not admissible: edges {first:?} and {second:?} meet in {shared:?}")]
    Inadmissible {
        first: (String, String),
        second: (String, String),
        shared: Vec<String>,
    },
    #[error("fullness check failed ({context}): witness {witness:?}")]
    NotFull { context: String, witness: Vec<String> },
    #[error("complex is not flag ({context}): witness {witness:?}")]
    NotFlag { context: String, witness: Vec<String> },
    #[error("receiving vertices span a link edge: {0:?}")]
    QuadrupleNotIndependent(Vec<(String, String)>),
    #[error("cross-check failed: {0}")]
    Mismatch(String),
    #[error("complex has {0} simplices, above the configured limit")]
    SizeLimit(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable name of the violated invariant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::LabelCollision(_) => "label_collision",
            Error::Loop(_) => "loop",
            Error::ParallelEdge(_, _) => "parallel_edge",
            Error::NotSubcomplex(_) => "not_subcomplex",
            Error::NotSimplicial(_) => "not_simplicial",
            Error::NotATree(_) => "not_a_tree",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NotAdjacent(_, _) => "not_adjacent",
            Error::Inadmissible { .. } => "inadmissible_marking",
            Error::NotFull { .. } => "not_full",
            Error::NotFlag { .. } => "not_flag",
            Error::QuadrupleNotIndependent(_) => "quadruple_not_independent",
            Error::Mismatch(_) => "cross_check_mismatch",
            Error::SizeLimit(_) => "size_limit",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
