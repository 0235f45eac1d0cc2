use std::fmt;

/// How a [`ComplexityEstimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ExactEnumeration,
    MonteCarlo,
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactEnumeration => "exact-enumeration",
            Method::MonteCarlo => "monte-carlo",
            Method::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact-enumeration" => Ok(Method::ExactEnumeration),
            "monte-carlo" => Ok(Method::MonteCarlo),
            "closed-form" => Ok(Method::ClosedForm),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// A numeric estimate of an expected supremum.
///
/// Exact and closed-form estimates always carry `std_error == 0`; Monte Carlo
/// estimates always carry `samples > 0`. The constructors enforce both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    /// Sign patterns enumerated (exact) or draws taken (Monte Carlo).
    pub samples: u64,
    pub seed: u64,
}

impl ComplexityEstimate {
    pub fn exact(value: f64, patterns: u64) -> Self {
        Self {
            value,
            std_error: 0.0,
            method: Method::ExactEnumeration,
            samples: patterns,
            seed: 0,
        }
    }

    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            method: Method::ClosedForm,
            samples: 0,
            seed: 0,
        }
    }

    pub fn monte_carlo(value: f64, std_error: f64, samples: u64, seed: u64) -> Self {
        assert!(samples > 0, "Monte Carlo estimate needs at least one sample");
        Self {
            value,
            std_error: std_error.max(0.0),
            method: Method::MonteCarlo,
            samples,
            seed,
        }
    }

    /// `value + z * std_error`.
    pub fn upper(&self, z: f64) -> f64 {
        self.value + z * self.std_error
    }

    /// `value - z * std_error`.
    pub fn lower(&self, z: f64) -> f64 {
        self.value - z * self.std_error
    }

    /// Divides value and standard error by a positive constant.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.std_error *= factor.abs();
        self
    }

    /// `quantity,value,std_error,method,samples,seed`.
    pub fn csv_row(&self, quantity: &str) -> String {
        format!(
            "{},{},{},{},{},{}",
            quantity, self.value, self.std_error, self.method, self.samples, self.seed
        )
    }
}

pub const ESTIMATE_CSV_HEADER: &str = "quantity,value,std_error,method,samples,seed";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_hold() {
        let e = ComplexityEstimate::exact(0.5, 4);
        assert_eq!(e.std_error, 0.0);
        let c = ComplexityEstimate::closed_form(1.0);
        assert_eq!(c.std_error, 0.0);
        let m = ComplexityEstimate::monte_carlo(1.0, 0.1, 10, 3);
        assert_eq!(m.upper(3.0), 1.0 + 0.30000000000000004);
        assert_eq!(m.csv_row("b"), "b,1,0.1,monte-carlo,10,3");
    }

    #[test]
    #[should_panic]
    fn monte_carlo_needs_samples() {
        ComplexityEstimate::monte_carlo(1.0, 0.0, 0, 0);
    }

    #[test]
    fn method_round_trip() {
        for m in [Method::ExactEnumeration, Method::MonteCarlo, Method::ClosedForm] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
    }
}
