//! JSON formats for configs, reports, and decompositions, plus the small
//! command-line polynomial parser.
//!
//! Cyclotomic literals are {"order": m, "terms": [[k, coeff], ...]} meaning
//! the sum of coeff * zeta_m^k; coefficients are integers or "num/den"
//! strings, canonicalized on load. Matrices are flat row-major lists of
//! literals.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::apolar::ApolarReport;
use crate::cyclo::{CyclotomicNumber, Rational};
use crate::error::{Error, Result};
use crate::groups::ReflectionGroup;
use crate::linalg::Matrix;
use crate::poly::{ExponentVector, LinearForm, Polynomial};
use crate::skew::SkewInvariant;
use crate::waring::{Provenance, VerificationResult, WaringDecomposition};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalRepr {
    Int(i64),
    Text(String),
}

impl RationalRepr {
    fn from_rational(r: &Rational) -> Self {
        use num::ToPrimitive;
        if r.is_integer() {
            if let Some(n) = r.numer().to_i64() {
                return RationalRepr::Int(n);
            }
        }
        RationalRepr::Text(r.to_string())
    }

    fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalRepr::Int(n) => Ok(Rational::from_integer((*n).into())),
            RationalRepr::Text(s) => Rational::from_str(s)
                .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycloDto {
    pub order: u32,
    pub terms: Vec<(u32, RationalRepr)>,
}

pub fn cyclo_to_dto(c: &CyclotomicNumber) -> CycloDto {
    CycloDto {
        order: c.order(),
        terms: c
            .terms()
            .map(|(k, r)| (k, RationalRepr::from_rational(r)))
            .collect(),
    }
}

pub fn cyclo_from_dto(dto: &CycloDto) -> Result<CyclotomicNumber> {
    if dto.order == 0 {
        return Err(Error::Parse("cyclotomic order must be positive".into()));
    }
    let mut terms = Vec::with_capacity(dto.terms.len());
    for (k, r) in &dto.terms {
        terms.push((*k, r.to_rational()?));
    }
    Ok(CyclotomicNumber::from_terms(dto.order, terms))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTermDto {
    pub exp: Vec<u32>,
    pub coeff: CycloDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDto {
    pub nvars: usize,
    pub order: u32,
    pub terms: Vec<PolyTermDto>,
}

pub fn polynomial_to_dto(p: &Polynomial) -> PolynomialDto {
    PolynomialDto {
        nvars: p.nvars(),
        order: p.coefficient_order(),
        terms: p
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| PolyTermDto {
                exp: e.0.clone(),
                coeff: cyclo_to_dto(c),
            })
            .collect(),
    }
}

pub fn polynomial_from_dto(dto: &PolynomialDto) -> Result<Polynomial> {
    let mut p = Polynomial::zero(dto.nvars);
    for t in &dto.terms {
        if t.exp.len() != dto.nvars {
            return Err(Error::Parse(format!(
                "exponent vector {:?} does not have {} entries",
                t.exp, dto.nvars
            )));
        }
        p.add_term(ExponentVector(t.exp.clone()), cyclo_from_dto(&t.coeff)?);
    }
    Ok(p)
}

fn vector_to_dto(v: &[CyclotomicNumber]) -> Vec<CycloDto> {
    v.iter().map(cyclo_to_dto).collect()
}

fn vector_from_dto(v: &[CycloDto]) -> Result<Vec<CyclotomicNumber>> {
    v.iter().map(cyclo_from_dto).collect()
}

pub fn matrix_to_dto(m: &Matrix) -> Vec<CycloDto> {
    m.entries().map(cyclo_to_dto).collect()
}

pub fn matrix_from_dto(nrows: usize, ncols: usize, flat: &[CycloDto]) -> Result<Matrix> {
    Matrix::from_flat(nrows, ncols, vector_from_dto(flat)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupConfigDto {
    pub nvars: usize,
    pub field_order: u32,
    /// One flat row-major matrix per generator.
    pub generators: Vec<Vec<CycloDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
}

pub fn group_from_config(dto: &GroupConfigDto, default_cap: usize) -> Result<ReflectionGroup> {
    let mut gens = Vec::with_capacity(dto.generators.len());
    for g in &dto.generators {
        gens.push(matrix_from_dto(dto.nvars, dto.nvars, g)?);
    }
    ReflectionGroup::from_generators(
        "custom",
        dto.nvars,
        dto.field_order,
        gens,
        dto.cap.unwrap_or(default_cap),
    )
}

pub fn group_to_config(g: &ReflectionGroup, cap: Option<usize>) -> GroupConfigDto {
    GroupConfigDto {
        nvars: g.nvars(),
        field_order: g.field_order(),
        generators: g
            .generator_indices()
            .iter()
            .map(|&i| matrix_to_dto(&g.element(i).matrix))
            .collect(),
        cap,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HyperplaneDto {
    pub functional: Vec<CycloDto>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupInfoDto {
    pub name: String,
    pub order: usize,
    pub nvars: usize,
    pub field_order: u32,
    pub degrees: Vec<u32>,
    pub reflection_count: usize,
    pub hyperplanes: Vec<HyperplaneDto>,
    pub regular_numbers: Vec<u32>,
}

pub fn group_info(g: &ReflectionGroup) -> Result<GroupInfoDto> {
    Ok(GroupInfoDto {
        name: g.name().to_string(),
        order: g.order(),
        nvars: g.nvars(),
        field_order: g.field_order(),
        degrees: g.degrees()?.to_vec(),
        reflection_count: g.reflections().len(),
        hyperplanes: g
            .hyperplanes()
            .iter()
            .map(|h| HyperplaneDto {
                functional: vector_to_dto(h.functional.coeffs()),
                multiplicity: h.multiplicity,
            })
            .collect(),
        regular_numbers: g.regular_numbers()?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SkewDto {
    pub group: String,
    pub degree: u32,
    pub normalization: String,
    pub nvars: usize,
    pub order: u32,
    pub terms: Vec<PolyTermDto>,
}

pub fn skew_to_dto(f: &SkewInvariant) -> SkewDto {
    let p = polynomial_to_dto(&f.polynomial);
    SkewDto {
        group: f.group_name.clone(),
        degree: f.degree,
        normalization: f.normalization.as_str().to_string(),
        nvars: p.nvars,
        order: p.order,
        terms: p.terms,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecTermDto {
    pub coeff: CycloDto,
    pub form: Vec<CycloDto>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationDto {
    pub exact: bool,
    pub scalar: Option<CycloDto>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionDto {
    pub group: String,
    #[serde(rename = "D")]
    pub d: u32,
    pub regular_number: u32,
    pub regular_element: Vec<CycloDto>,
    pub eigenform: Vec<CycloDto>,
    pub terms: Vec<DecTermDto>,
    pub verification: VerificationDto,
    /// Set when a rank report confirms the term count is minimal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
}

pub fn decomposition_to_dto(
    dec: &WaringDecomposition,
    ver: &VerificationResult,
) -> Result<DecompositionDto> {
    let prov = dec.provenance.as_ref().ok_or_else(|| {
        Error::BadForm("decomposition carries no group provenance".into())
    })?;
    Ok(DecompositionDto {
        group: prov.group_name.clone(),
        d: dec.exponent,
        regular_number: prov.regular_number,
        regular_element: matrix_to_dto(&prov.regular_element),
        eigenform: vector_to_dto(prov.eigenform.coeffs()),
        terms: dec
            .terms
            .iter()
            .map(|(c, l)| DecTermDto {
                coeff: cyclo_to_dto(c),
                form: vector_to_dto(l.coeffs()),
            })
            .collect(),
        verification: VerificationDto {
            exact: ver.exact,
            scalar: ver.scalar.as_ref().map(cyclo_to_dto),
        },
        certified: None,
    })
}

pub fn decomposition_from_dto(
    dto: &DecompositionDto,
) -> Result<(WaringDecomposition, VerificationResult)> {
    let nvars = dto.eigenform.len();
    let element = matrix_from_dto(nvars, nvars, &dto.regular_element)?;
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in &dto.terms {
        if t.form.len() != nvars {
            return Err(Error::Parse("mixed variable counts in terms".into()));
        }
        terms.push((
            cyclo_from_dto(&t.coeff)?,
            LinearForm::new(vector_from_dto(&t.form)?),
        ));
    }
    let dec = WaringDecomposition {
        nvars,
        exponent: dto.d,
        provenance: Some(Provenance {
            group_name: dto.group.clone(),
            regular_number: dto.regular_number,
            subgroup_order: matrix_order(&element)?,
            regular_element: element,
            eigenform: LinearForm::new(vector_from_dto(&dto.eigenform)?),
            coset_count: terms.len(),
        }),
        terms,
    };
    let ver = VerificationResult {
        scalar: dto
            .verification
            .scalar
            .as_ref()
            .map(cyclo_from_dto)
            .transpose()?,
        exact: dto.verification.exact,
        term_count: dec.terms.len(),
    };
    Ok((dec, ver))
}

/// Multiplicative order of a finite-order matrix, with a guard against
/// non-periodic input.
fn matrix_order(m: &Matrix) -> Result<u32> {
    let mut p = m.clone();
    for k in 1..=10_000u32 {
        if p.is_identity() {
            return Ok(k);
        }
        p = p.mul(m);
    }
    Err(Error::Parse("matrix does not have small finite order".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApolarReportDto {
    pub hilbert: Vec<usize>,
    pub dim_af: usize,
    pub generator_degrees: Vec<u32>,
    pub delta: u32,
    pub rs_lower_bound: usize,
    pub upper_bound: Option<usize>,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ccg_reference: Option<u64>,
    /// Whether the averaged invariant operators annihilate the form; only
    /// present when the input came from a reflection group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steinberg: Option<bool>,
    /// Exact binary rank, present when requested for a two-variable form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sylvester_rank: Option<usize>,
}

pub fn apolar_to_dto(r: &ApolarReport) -> ApolarReportDto {
    ApolarReportDto {
        hilbert: r.hilbert.clone(),
        dim_af: r.dim_af,
        generator_degrees: r.generator_degrees.clone(),
        delta: r.delta,
        rs_lower_bound: r.rs_lower_bound,
        upper_bound: r.upper_bound,
        certified: r.certified,
        ccg_reference: r.ccg_reference,
        steinberg: None,
        sylvester_rank: None,
    }
}

pub fn apolar_from_dto(dto: &ApolarReportDto) -> ApolarReport {
    ApolarReport {
        hilbert: dto.hilbert.clone(),
        dim_af: dto.dim_af,
        generator_degrees: dto.generator_degrees.clone(),
        delta: dto.delta,
        rs_lower_bound: dto.rs_lower_bound,
        upper_bound: dto.upper_bound,
        certified: dto.certified,
        ccg_reference: dto.ccg_reference,
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Parses integer-coefficient polynomials from the command line. Variables
/// are x, y, z, w or x1..xn; supports +, -, *, ^, parentheses, and implicit
/// multiplication by juxtaposition.
pub fn parse_form(src: &str) -> Result<Polynomial> {
    let tokens = tokenize(src)?;
    let nvars = tokens
        .iter()
        .filter_map(|t| match t {
            Token::Var(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    let mut parser = Parser { tokens, pos: 0, nvars };
    let p = parser.expression()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse(format!(
            "unexpected trailing input at token {}",
            parser.pos
        )));
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(i64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad integer {text:?}: {e}")))?;
                out.push(Token::Int(n));
            }
            'x' | 'y' | 'z' | 'w' => {
                let mut digits = String::new();
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    digits.push(chars[j]);
                    j += 1;
                }
                let index = if digits.is_empty() {
                    match c {
                        'x' => 0,
                        'y' => 1,
                        'z' => 2,
                        _ => 3,
                    }
                } else {
                    if c != 'x' {
                        return Err(Error::Parse(format!(
                            "numbered variables must use x, found {c}{digits}"
                        )));
                    }
                    let k = digits
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad variable index: {e}")))?;
                    if k == 0 {
                        return Err(Error::Parse("variable indices start at 1".into()));
                    }
                    k - 1
                };
                out.push(Token::Var(index));
                i = j;
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expression(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Token::Plus) => {
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(op) = self.peek() {
            let minus = match op {
                Token::Plus => false,
                Token::Minus => true,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            acc = if minus { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Token::Int(_)) | Some(Token::Var(_)) | Some(Token::Open) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Polynomial::constant(self.nvars, CyclotomicNumber::from_integer(n))
            }
            Some(Token::Var(i)) => {
                self.pos += 1;
                Polynomial::variable(self.nvars, i)
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expression()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(Error::Parse("missing closing parenthesis".into()));
                }
                self.pos += 1;
                inner
            }
            other => {
                return Err(Error::Parse(format!(
                    "expected a number, variable, or parenthesis, found {other:?}"
                )))
            }
        };
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Int(e)) if e >= 0 => {
                    self.pos += 1;
                    Ok(base.pow(e as u32))
                }
                other => Err(Error::Parse(format!(
                    "expected a non-negative exponent, found {other:?}"
                ))),
            }
        } else {
            Ok(base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat;
    use crate::groups::{FamilySpec, DEFAULT_CAP};
    use crate::skew::build_skew_invariant;
    use crate::waring::{decompose, verify};

    #[test]
    fn cyclotomic_literals_round_trip() {
        let z = CyclotomicNumber::root_of_unity(12, 5)
            .scale(&rat(3, 7))
            .add(&CyclotomicNumber::from_integer(2));
        let dto = cyclo_to_dto(&z);
        assert_eq!(cyclo_from_dto(&dto).unwrap(), z);
        let json = serde_json::to_string(&dto).unwrap();
        let back: CycloDto = serde_json::from_str(&json).unwrap();
        assert_eq!(back, dto);
        // integer coefficients serialize as bare numbers
        let five = cyclo_to_dto(&CyclotomicNumber::from_integer(5));
        assert_eq!(serde_json::to_string(&five).unwrap(), r#"{"order":1,"terms":[[0,5]]}"#);
    }

    #[test]
    fn mixed_coefficient_spellings_parse() {
        let json = r#"{"order": 4, "terms": [[0, "1/2"], [1, -2], [1, "3"]]}"#;
        let dto: CycloDto = serde_json::from_str(json).unwrap();
        let z = cyclo_from_dto(&dto).unwrap();
        let expected = CyclotomicNumber::from_rational(rat(1, 2))
            .add(&CyclotomicNumber::root_of_unity(4, 1));
        assert_eq!(z, expected);
    }

    #[test]
    fn polynomials_round_trip() {
        let g = ReflectionGroup::build_family(&FamilySpec::Symmetric { n: 3 }, DEFAULT_CAP)
            .unwrap();
        let f = build_skew_invariant(&g).unwrap().polynomial;
        let dto = polynomial_to_dto(&f);
        assert_eq!(polynomial_from_dto(&dto).unwrap(), f);
        let json = to_json_string(&dto).unwrap();
        let back: PolynomialDto = serde_json::from_str(&json).unwrap();
        assert_eq!(polynomial_from_dto(&back).unwrap(), f);
    }

    #[test]
    fn group_configs_round_trip() {
        let g = ReflectionGroup::build_family(&FamilySpec::Hyperoctahedral { n: 2 }, DEFAULT_CAP)
            .unwrap();
        let cfg = group_to_config(&g, Some(1000));
        let json = to_json_string(&cfg).unwrap();
        let back: GroupConfigDto = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
        let rebuilt = group_from_config(&back, DEFAULT_CAP).unwrap();
        assert_eq!(rebuilt.order(), 8);
        assert_eq!(rebuilt.degrees().unwrap(), &[2, 4]);
    }

    #[test]
    fn decompositions_round_trip() {
        let g = ReflectionGroup::build_family(&FamilySpec::Symmetric { n: 3 }, DEFAULT_CAP)
            .unwrap();
        let f = build_skew_invariant(&g).unwrap().polynomial;
        let dec = decompose(&g, 3).unwrap();
        let ver = verify(&dec, &f).unwrap();
        let dto = decomposition_to_dto(&dec, &ver).unwrap();
        let json = to_json_string(&dto).unwrap();
        let parsed: DecompositionDto = serde_json::from_str(&json).unwrap();
        assert_eq!(to_json_string(&parsed).unwrap(), json);
        let (dec2, ver2) = decomposition_from_dto(&parsed).unwrap();
        assert_eq!(dec2.nvars, dec.nvars);
        assert_eq!(dec2.exponent, dec.exponent);
        assert_eq!(dec2.terms, dec.terms);
        let p1 = dec.provenance.unwrap();
        let p2 = dec2.provenance.unwrap();
        assert_eq!(p2.group_name, p1.group_name);
        assert_eq!(p2.regular_number, p1.regular_number);
        assert_eq!(p2.subgroup_order, p1.subgroup_order);
        assert_eq!(p2.eigenform, p1.eigenform);
        assert_eq!(ver2.exact, ver.exact);
        assert_eq!(ver2.scalar, ver.scalar);
    }

    #[test]
    fn apolar_reports_round_trip() {
        let report = ApolarReport {
            hilbert: vec![1, 2, 2, 1],
            dim_af: 6,
            generator_degrees: vec![1, 2, 3],
            delta: 3,
            rs_lower_bound: 2,
            upper_bound: Some(2),
            certified: true,
            ccg_reference: None,
        };
        let dto = apolar_to_dto(&report);
        let json = to_json_string(&dto).unwrap();
        let back: ApolarReportDto = serde_json::from_str(&json).unwrap();
        assert_eq!(apolar_from_dto(&back), report);
        assert!(!json.contains("ccgReference"));
    }

    #[test]
    fn form_parser_handles_the_documented_syntax() {
        let x = Polynomial::variable(2, 0);
        let y = Polynomial::variable(2, 1);
        assert_eq!(parse_form("x^5 - y^5").unwrap(), x.pow(5).sub(&y.pow(5)));
        assert_eq!(parse_form("x1*x2^2").unwrap(), x.mul(&y.pow(2)));
        assert_eq!(parse_form("x y^2").unwrap(), x.mul(&y.pow(2)));
        assert_eq!(
            parse_form("2*x*y + y^2").unwrap(),
            x.mul(&y).scale(&CyclotomicNumber::from_integer(2)).add(&y.pow(2))
        );
        let expanded = parse_form("(x+y)^2 - x^2 - 2 x y - y^2").unwrap();
        assert!(expanded.is_zero());
        let three = Polynomial::variable(3, 2);
        assert_eq!(parse_form("z^2").unwrap(), three.pow(2));
        assert_eq!(parse_form("-x").unwrap(), Polynomial::variable(1, 0).neg());
        assert!(parse_form("x +").is_err());
        assert!(parse_form("q").is_err());
        assert!(parse_form("x^-2").is_err());
    }
}
