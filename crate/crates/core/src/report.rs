//! Per-declaration outcomes shared by every checker.

use alloc::string::String;
use core::fmt;

use crate::sexp::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Failed,
    /// A declaration that was required to fail, and did.
    ExpectedReject,
    /// A declaration that was required to fail, but checked.
    UnexpectedAccept,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::ExpectedReject => "expected-reject",
            Status::UnexpectedAccept => "unexpected-accept",
        }
    }

    /// Whether the record counts as a success for the exit code.
    pub fn passes(self) -> bool {
        matches!(self, Status::Ok | Status::ExpectedReject)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub kind: String,
    pub span: Span,
    pub status: Status,
    pub message: Option<String>,
}
