use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use anyhow::anyhow;

pub const USAGE: u8 = 1;
pub const DATA: u8 = 2;
pub const INTERNAL: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(msg: impl Display) -> Self {
        Failure {
            code: USAGE,
            error: anyhow!("{msg}"),
        }
    }

    pub fn internal(msg: impl Display) -> Self {
        Failure {
            code: INTERNAL,
            error: anyhow!("{msg}"),
        }
    }

    pub fn context(self, ctx: impl Display) -> Self {
        Failure {
            code: self.code,
            error: self.error.context(ctx.to_string()),
        }
    }
}

impl From<nlgm::Error> for Failure {
    fn from(e: nlgm::Error) -> Self {
        let code = match e {
            nlgm::Error::InvalidConfig(_) | nlgm::Error::MissingTable(_) => USAGE,
            _ => DATA,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

pub trait Context<T> {
    fn at(self, path: &Path) -> Result<T, Failure>;
}

impl<T> Context<T> for nlgm::Result<T> {
    fn at(self, path: &Path) -> Result<T, Failure> {
        self.map_err(|e| Failure::from(e).context(path.display()))
    }
}

pub fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure {
        code: DATA,
        error: anyhow::Error::new(e).context(path.display().to_string()),
    })
}

/// Writes to `out`, or to stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let result = match out {
        Some(path) => std::fs::write(path, text).map_err(|e| (e, path.display().to_string())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| (e, "stdout".to_string()))
        }
    };
    result.map_err(|(e, target)| Failure {
        code: DATA,
        error: anyhow::Error::new(e).context(target),
    })
}
