use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid of `n` points on `[x0, x1]`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x0: f64,
    x1: f64,
    n: usize,
}

impl Grid {
    pub fn new(x0: f64, x1: f64, n: usize) -> Result<Self> {
        if !(x0.is_finite() && x1.is_finite()) {
            return Err(Error::Argument(format!(
                "grid endpoints must be finite, got {x0}:{x1}"
            )));
        }
        if n < 2 {
            return Err(Error::Argument(format!("grid needs n >= 2 points, got {n}")));
        }
        if x0 >= x1 {
            return Err(Error::Argument(format!(
                "grid needs x0 < x1, got {x0}:{x1}"
            )));
        }
        Ok(Grid { x0, x1, n })
    }

    /// Parses the `x0:x1:n` command-line form.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "grid must look like x0:x1:n, got {text:?}"
            )));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad grid endpoint {s:?}: {e}")))
        };
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad grid count {:?}: {e}", parts[2])))?;
        Grid::new(num(parts[0])?, num(parts[1])?, n)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.x1 - self.x0) / (self.n - 1) as f64
    }

    /// The `i`-th node. The last node is exactly `x1`.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x1
        } else {
            self.x0 + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Same interval with twice as many intervals.
    pub fn refined(&self) -> Grid {
        Grid {
            n: 2 * self.n - 1,
            ..*self
        }
    }

    /// Index of the node at or just below `x`, clamped to the last interval.
    pub fn cell(&self, x: f64) -> usize {
        let t = ((x - self.x0) / self.step()).floor();
        if t <= 0.0 {
            0
        } else {
            (t as usize).min(self.n - 2)
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x0 && x <= self.x1
    }

    pub fn spec_string(&self) -> String {
        format!("{}:{}:{}", self.x0, self.x1, self.n)
    }
}
