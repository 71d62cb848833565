//! Exact JSON encodings of coefficients, elements and tensors.
//!
//! Rationals are always written `"num/den"` with a positive denominator, so
//! parsing an emitted document and emitting it again is byte-identical.

use hallforge_core::{ClassId, HallCoef, HallElement, TensorElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// `a + b·sqrt(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefJson {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarJson {
    pub q: u64,
    pub value: CoefJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub class: String,
    pub coef: CoefJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub q: u64,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorTermJson {
    pub classes: Vec<String>,
    pub coef: CoefJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorJson {
    pub q: u64,
    pub arity: usize,
    pub terms: Vec<TensorTermJson>,
}

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> CliResult<BigRational> {
    let bad = || CliError::input(format!("bad rational {s:?}"));
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl CoefJson {
    pub fn from_coef(c: &HallCoef) -> Self {
        CoefJson {
            a: rational_string(c.a()),
            b: rational_string(c.b()),
        }
    }

    pub fn to_coef(&self, q: u64) -> CliResult<HallCoef> {
        Ok(HallCoef::new(parse_rational(&self.a)?, parse_rational(&self.b)?, q))
    }
}

impl ScalarJson {
    pub fn from_coef(c: &HallCoef) -> Self {
        ScalarJson {
            q: c.q(),
            value: CoefJson::from_coef(c),
        }
    }
}

fn parse_class(s: &str) -> CliResult<ClassId> {
    s.parse().map_err(|_| CliError::input(format!("bad class id {s:?}")))
}

impl ElementJson {
    pub fn from_element(x: &HallElement) -> Self {
        ElementJson {
            q: x.q(),
            terms: x
                .terms()
                .iter()
                .map(|(id, c)| TermJson {
                    class: id.to_string(),
                    coef: CoefJson::from_coef(c),
                })
                .collect(),
        }
    }

    pub fn to_element(&self) -> CliResult<HallElement> {
        let mut x = HallElement::zero(self.q);
        for t in &self.terms {
            x.add_term(parse_class(&t.class)?, &t.coef.to_coef(self.q)?);
        }
        Ok(x)
    }
}

impl TensorJson {
    pub fn from_tensor(x: &TensorElement) -> Self {
        TensorJson {
            q: x.q(),
            arity: x.arity(),
            terms: x
                .terms()
                .iter()
                .map(|(key, c)| TensorTermJson {
                    classes: key.iter().map(ToString::to_string).collect(),
                    coef: CoefJson::from_coef(c),
                })
                .collect(),
        }
    }

    pub fn to_tensor(&self) -> CliResult<TensorElement> {
        let mut x = TensorElement::zero(self.q, self.arity);
        for t in &self.terms {
            if t.classes.len() != self.arity {
                return Err(CliError::input("tensor term of the wrong arity"));
            }
            let key = t.classes.iter().map(|s| parse_class(s)).collect::<CliResult<Vec<_>>>()?;
            x.add_term(key, &t.coef.to_coef(self.q)?);
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hallforge_core::DimVector;

    #[test]
    fn rationals_are_canonical() {
        let r = parse_rational("2/-4").unwrap();
        assert_eq!(rational_string(&r), "-1/2");
        assert_eq!(rational_string(&BigRational::from_integer(3.into())), "3/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1").is_err());
    }

    #[test]
    fn element_round_trip() {
        let q = 2;
        let mut x = HallElement::zero(q);
        let id = |p| ClassId { dims: DimVector::new(&[1, 1]), point: p };
        x.add_term(id(0), &HallCoef::ratio(-1, 3, q));
        x.add_term(id(1), &HallCoef::v_pow(-1, q));
        let text = serde_json::to_string(&ElementJson::from_element(&x)).unwrap();
        assert_eq!(
            text,
            r#"{"q":2,"terms":[{"class":"1,1:0","coef":{"a":"-1/3","b":"0/1"}},{"class":"1,1:1","coef":{"a":"0/1","b":"1/2"}}]}"#
        );
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_element().unwrap(), x);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
