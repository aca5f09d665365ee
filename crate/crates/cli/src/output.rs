//! Deterministic report printing, human or line-oriented machine format.

use ssework_core::matrix::IntMatrix;
use ssework_core::scalar::Scalar;
use ssework_core::verdict::Verdict;
use std::fmt::Display;

pub struct Printer {
    machine: bool,
}

impl Printer {
    pub fn new(machine: bool) -> Self {
        Printer { machine }
    }

    pub fn kv(&self, key: &str, value: impl Display) {
        if self.machine {
            println!("{} {}", key.to_uppercase().replace(' ', "-"), value);
        } else {
            println!("{key}: {value}");
        }
    }

    pub fn matrix<T: Scalar>(&self, key: &str, m: &IntMatrix<T>) {
        if self.machine {
            let mut line = format!("{} {} {}", key.to_uppercase(), m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    line.push(' ');
                    line.push_str(&m[(i, j)].to_string());
                }
            }
            println!("{line}");
        } else {
            println!("{key} ({}x{}):", m.rows(), m.cols());
            print!("{m}");
        }
    }

    pub fn line(&self, machine_line: &str, human_line: &str) {
        if self.machine {
            println!("{machine_line}");
        } else {
            println!("{human_line}");
        }
    }

    /// Print a verdict and return the exit code it implies. Refutation lines
    /// always begin with `REFUTED `.
    pub fn verdict(&self, v: &Verdict) -> i32 {
        match v {
            Verdict::Verified { warnings } => {
                println!("VERIFIED");
                for w in warnings {
                    println!("WARN {w}");
                }
                0
            }
            Verdict::Refuted { locus } => {
                println!("REFUTED {locus}");
                1
            }
        }
    }
}
