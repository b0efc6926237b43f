use std::fs;
use std::io::{self, Read};

use subkit::bratteli::BratteliDiagram;
use subkit::ordered::OrderedDiagram;
use subkit::{ExactMatrix, Substitution};

use crate::error::CliError;

/// A parsed input file. The format is sniffed from the content, so
/// extensions do not matter and stdin works the same way.
#[derive(Debug, Clone)]
pub enum Input {
    Sub(Substitution),
    Mat(ExactMatrix),
    Diagram(BratteliDiagram),
    Ordered(OrderedDiagram),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Sub(_) => "substitution",
            Input::Mat(_) => "matrix",
            Input::Diagram(_) => "diagram",
            Input::Ordered(_) => "ordered diagram",
        }
    }
}

pub fn read_text(path: &str) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn looks_like_sub(text: &str) -> bool {
    text.lines().any(|l| {
        let l = l.split('#').next().unwrap_or("");
        l.contains("->") || l.trim_start().starts_with("letters")
    })
}

pub fn parse(path: &str, text: &str) -> Result<Input, CliError> {
    let data = |e: subkit::Error| CliError::data(path, e);
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::json(path, e))?;
        return if value.get("orders").is_some() {
            serde_json::from_value(value).map(Input::Ordered).map_err(|e| CliError::json(path, e))
        } else {
            serde_json::from_value(value).map(Input::Diagram).map_err(|e| CliError::json(path, e))
        };
    }
    if looks_like_sub(text) {
        Substitution::parse_sub(text).map(Input::Sub).map_err(data)
    } else {
        ExactMatrix::parse_mat(text).map(Input::Mat).map_err(data)
    }
}

pub fn load(path: &str) -> Result<Input, CliError> {
    parse(path, &read_text(path)?)
}

pub fn load_sub(path: &str) -> Result<Substitution, CliError> {
    match load(path)? {
        Input::Sub(s) => Ok(s),
        other => Err(CliError::wrong_kind(path, "a substitution", other.kind())),
    }
}

pub fn load_square_sub(path: &str) -> Result<Substitution, CliError> {
    let s = load_sub(path)?;
    if s.is_square() {
        Ok(s)
    } else {
        Err(CliError::Data {
            path: path.to_string(),
            msg: "expected a substitution on a single alphabet".into(),
        })
    }
}

pub fn load_mat(path: &str) -> Result<ExactMatrix, CliError> {
    match load(path)? {
        Input::Mat(m) => Ok(m),
        other => Err(CliError::wrong_kind(path, "a matrix", other.kind())),
    }
}

/// A matrix, or the incidence matrix of a substitution's diagram.
pub fn load_incidence(path: &str) -> Result<ExactMatrix, CliError> {
    match load(path)? {
        Input::Mat(m) => Ok(m),
        Input::Sub(s) => Ok(s.abelianize().transpose()),
        other => Err(CliError::wrong_kind(path, "a matrix or substitution", other.kind())),
    }
}
