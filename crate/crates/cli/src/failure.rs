use qmarkov::Error;
use serde_json::{json, Value};

/// Exit status categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Domain,
    Input,
}

/// A failed run, rendered as a structured error object.
#[derive(Debug, Clone)]
pub struct Failure {
    pub category: Category,
    pub kind: String,
    pub message: String,
    pub path: Option<String>,
}

impl Failure {
    pub fn io(message: String) -> Self {
        Failure { category: Category::Input, kind: "Io".into(), message, path: None }
    }

    pub fn schema(message: String, path: &str) -> Self {
        let path = if path.is_empty() || path == "." { None } else { Some(path.to_string()) };
        Failure { category: Category::Input, kind: "Schema".into(), message, path }
    }

    pub fn usage(message: String) -> Self {
        Failure { category: Category::Input, kind: "Usage".into(), message, path: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category {
            Category::Domain => 1,
            Category::Input => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message, "path": self.path } })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { category: Category::Domain, kind: e.name().into(), message: e.to_string(), path: None }
    }
}
