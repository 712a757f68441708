use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// A homogeneous binary form `F(x, y) = Σ cᵢ xⁱ y^{d−i}` with rational
/// coefficients and degree `d ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    /// `coeffs[i]` multiplies `xⁱ y^{d−i}`.
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    /// Builds a form from `(coefficient, deg_x, deg_y)` terms. All terms must
    /// share the same total degree, which must be positive.
    pub fn from_terms(terms: &[(Rational, u32, u32)]) -> Result<Self> {
        let degree = match terms.first() {
            Some((_, i, j)) => i + j,
            None => return Err(Error::Precondition("empty binary form".into())),
        };
        if degree == 0 {
            return Err(Error::Precondition("binary form of degree 0".into()));
        }
        let mut coeffs = vec![Rational::zero(); degree as usize + 1];
        for (c, i, j) in terms {
            if i + j != degree {
                return Err(Error::Precondition(format!(
                    "form is not homogeneous: x^{i} y^{j} in a degree {degree} form"
                )));
            }
            coeffs[*i as usize] += c;
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::Precondition("zero binary form".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    /// The form `x`.
    pub fn identity() -> Self {
        BinaryForm { coeffs: vec![Rational::zero(), Rational::one()] }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    /// `(coefficient, deg_x)` for the nonzero terms, in ascending `deg_x`.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c, i as u32))
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let d = self.degree() as usize;
        self.terms().fold(Rational::zero(), |acc, (c, i)| {
            let i = i as usize;
            acc + c * pow(x, i) * pow(y, d - i)
        })
    }

    /// `F(λ, 1)`.
    pub fn eval_affine(&self, lambda: &Rational) -> Rational {
        self.eval(lambda, &Rational::one())
    }
}

fn pow(r: &Rational, k: usize) -> Rational {
    num_traits::pow(r.clone(), k)
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (c, i) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let j = d - i;
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let c = c.abs();
            if !c.is_one() {
                write!(f, "{c}")?;
                if i + j > 0 {
                    f.write_str("*")?;
                }
            }
            let mut vars = Vec::new();
            for (name, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    e => vars.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&vars.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for BinaryForm {
    type Err = Error;

    /// Parses sums of terms such as `x^2 + y^2`, `3x*y^2 - 1/2 y^3` or `x`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("binary form {s:?}: {why}"));
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut pos = 0;
        while pos < chars.len() {
            let mut negative = false;
            match chars[pos] {
                '+' => pos += 1,
                '-' => {
                    negative = true;
                    pos += 1;
                }
                _ if pos > 0 => return Err(bad("expected + or -")),
                _ => {}
            }
            let mut coeff = Rational::one();
            let start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                pos += 1;
            }
            if pos > start {
                let text: String = chars[start..pos].iter().collect();
                coeff = crate::arith::parse_rational(&text).map_err(|_| bad("bad coefficient"))?;
            }
            let (mut i, mut j) = (0u32, 0u32);
            let mut saw_factor = pos > start;
            while pos < chars.len() && !matches!(chars[pos], '+' | '-') {
                if chars[pos] == '*' {
                    pos += 1;
                    continue;
                }
                let var = chars[pos];
                pos += 1;
                let mut e = 1u32;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let st = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let text: String = chars[st..pos].iter().collect();
                    e = text.parse().map_err(|_| bad("bad exponent"))?;
                }
                match var {
                    'x' => i += e,
                    'y' => j += e,
                    _ => return Err(bad("only x and y are allowed")),
                }
                saw_factor = true;
            }
            if !saw_factor {
                return Err(bad("empty term"));
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((coeff, i, j));
        }
        BinaryForm::from_terms(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn parse_and_display() {
        let f: BinaryForm = "x^2 + y^2".parse().unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "x^2 + y^2");
        let g: BinaryForm = "3x*y^2 - 1/2 y^3".parse().unwrap();
        assert_eq!(g.to_string(), "3*x*y^2 - 1/2*y^3");
        assert_eq!(g.to_string().parse::<BinaryForm>().unwrap(), g);
        assert_eq!("x".parse::<BinaryForm>().unwrap(), BinaryForm::identity());
        assert_eq!("-x^3+2xy^2".parse::<BinaryForm>().unwrap().to_string(), "-x^3 + 2*x*y^2");
    }

    #[test]
    fn rejects_bad_forms() {
        assert!("x^2 + y".parse::<BinaryForm>().is_err());
        assert!("x + z".parse::<BinaryForm>().is_err());
        assert!("3".parse::<BinaryForm>().is_err());
        assert!("x - x".parse::<BinaryForm>().is_err());
        assert!("".parse::<BinaryForm>().is_err());
        assert!("x ++ y".parse::<BinaryForm>().is_err());
    }

    #[test]
    fn evaluation() {
        let f: BinaryForm = "x^2 + y^2".parse().unwrap();
        assert_eq!(f.eval(&rat(1), &rat(2)), rat(5));
        assert_eq!(f.eval_affine(&ratio(1, 3)), ratio(10, 9));
        let g: BinaryForm = "x^3 - 2y^3".parse().unwrap();
        assert_eq!(g.eval(&rat(2), &rat(-1)), rat(10));
    }
}
