//! Families of implicit spectral curves: a polynomial template indexed by
//! a real parameter, plus standalone lines.

use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// A family of plane curves `template(point, theta) = 0` for `theta` in a
/// finite index list, together with standalone curves (typically lines)
/// that belong to the picture at every level.
#[derive(Clone, Debug)]
pub struct CurveFamily {
    /// Catalog name of the family.
    pub name: String,
    /// Names of the spatial variables.
    pub vars: Vec<String>,
    /// Implicit polynomial in `vars.len() + 1` variables; the last
    /// variable is the family index theta.
    pub template: MultiPoly,
    /// Index values instantiating the template, ascending.
    pub theta_values: Vec<f64>,
    /// Standalone curves in the spatial variables only.
    pub lines: Vec<MultiPoly>,
    /// Complex preimages dropped while building the index list.
    pub dropped_complex: usize,
}

impl CurveFamily {
    /// Validate and build a family.
    ///
    /// Requires every instantiated curve to be a nonzero polynomial; this
    /// holds whenever some spatial monomial of the template has a
    /// theta-free coefficient, which is checked here.
    pub fn new(
        name: impl Into<String>,
        vars: Vec<String>,
        template: MultiPoly,
        theta_values: Vec<f64>,
        lines: Vec<MultiPoly>,
        dropped_complex: usize,
    ) -> Result<Self> {
        let spatial = vars.len();
        if template.arity() != spatial + 1 {
            return Err(Error::Mismatch(format!(
                "template has arity {}, expected {} spatial variables plus theta",
                template.arity(),
                spatial
            )));
        }
        for line in &lines {
            if line.arity() != spatial {
                return Err(Error::Mismatch(
                    "line polynomial arity differs from the spatial arity".into(),
                ));
            }
            if line.is_zero() {
                return Err(Error::Invalid("line polynomial is zero".into()));
            }
        }
        // A term with theta-exponent 0 cannot be cancelled by any choice of
        // theta, so its presence keeps every instantiation nonzero.
        let anchored = template
            .terms()
            .any(|(exps, _)| exps[spatial] == 0);
        if !anchored {
            return Err(Error::Invalid(
                "every template term carries theta; some instantiation could vanish".into(),
            ));
        }
        Ok(CurveFamily {
            name: name.into(),
            vars,
            template,
            theta_values,
            lines,
            dropped_complex,
        })
    }

    /// Number of spatial variables.
    pub fn spatial_arity(&self) -> usize {
        self.vars.len()
    }

    /// Absolute value of the template at `point` with index `theta`.
    pub fn template_residual(&self, point: &[f64], theta: f64) -> f64 {
        let mut full = point.to_vec();
        full.push(theta);
        self.template.eval_real(&full).abs()
    }

    /// Distance-like residual of a point against the whole family: the
    /// smallest absolute value over all instantiated curves and lines.
    pub fn residual(&self, point: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for line in &self.lines {
            best = best.min(line.eval_real(point).abs());
        }
        for &theta in &self.theta_values {
            best = best.min(self.template_residual(point, theta));
        }
        best
    }

    /// Human-readable description of the family.
    pub fn describe(&self) -> String {
        let mut refs: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        refs.push("th");
        let spatial_refs: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let mut out = format!(
            "curve family {} on ({}): {} = 0\n",
            self.name,
            self.vars.join(", "),
            self.template.render(&refs)
        );
        out.push_str(&format!(
            "  {} theta values ({} complex preimages dropped)\n",
            self.theta_values.len(),
            self.dropped_complex
        ));
        for line in &self.lines {
            out.push_str(&format!("  line: {} = 0\n", line.render(&spatial_refs)));
        }
        out
    }
}
