//! Towers of degree-`p` Artin–Schreier steps over a tame base, and the
//! automorphisms acting on them.
//!
//! The base is the germ with parameter `x`; for tame degree `m` the
//! function `u = x^(-m)` lives on the line below. Step `k` adjoins `v_k`
//! with `v_k^p - v_k = R_k(x, v_1, ..., v_{k-1})`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::ascover::FieldJson;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, Raw};

use super::mpoly::MPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSpec {
    field: Field,
    m: u64,
    names: Vec<String>,
    rhs: Vec<MPoly>,
}

/// An automorphism given by `x -> x_scale·x` and, per step variable,
/// `v_k -> scale_k·v_k + shift_k` with `shift_k` in earlier variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorAction {
    pub name: String,
    pub x_scale: Raw,
    pub images: Vec<(Raw, MPoly)>,
}

/// A tower automorphism in normal form: the image of `x` is
/// `x_scale·x` and `images[k]` is the reduced image of `v_{k+1}`. Equal
/// automorphisms have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub x_scale: Raw,
    pub images: Vec<MPoly>,
}

impl TowerSpec {
    /// `steps` lists `(name, R_k)`; `R_k` may use `x` with any exponent and
    /// earlier step variables with nonnegative exponents.
    pub fn new(field: &Field, m: u64, steps: Vec<(String, MPoly)>) -> Result<Self> {
        let p = field.characteristic();
        let q = field.order();
        if m == 0 || m.is_multiple_of(p) {
            return Err(Error::InvalidTower(format!(
                "tame degree m = {m} must be positive and prime to p = {p}"
            )));
        }
        if !(q - 1).is_multiple_of(m) {
            return Err(Error::InvalidTower(format!(
                "the coefficient field F_{q} has no primitive {m}-th root of unity"
            )));
        }
        let nvars = steps.len() + 1;
        let mut names = Vec::with_capacity(steps.len());
        let mut rhs = Vec::with_capacity(steps.len());
        for (k, (name, r)) in steps.into_iter().enumerate() {
            if name.is_empty() || name == "x" || names.contains(&name) {
                return Err(Error::InvalidTower(format!("bad or repeated variable name {name:?}")));
            }
            if r.nvars() != nvars {
                return Err(Error::InvalidTower(format!(
                    "right-hand side of {name} has {} variables, expected {nvars}",
                    r.nvars()
                )));
            }
            check_earlier(&r, k + 1, &name)?;
            if r.terms().any(|(e, _)| e[0] > 0) {
                return Err(Error::InvalidTower(format!(
                    "right-hand side of {name} has a pole away from x = 0"
                )));
            }
            if r.is_zero() {
                return Err(Error::InvalidTower(format!("right-hand side of {name} is zero")));
            }
            names.push(name);
            rhs.push(r);
        }
        Ok(TowerSpec {
            field: field.clone(),
            m,
            names,
            rhs,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n_steps(&self) -> usize {
        self.rhs.len()
    }

    pub fn nvars(&self) -> usize {
        self.rhs.len() + 1
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rhs(&self) -> &[MPoly] {
        &self.rhs
    }

    /// Index of a variable: 0 for `x`, `k` for the `k`-th step variable.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        if name == "x" {
            return Some(0);
        }
        self.names.iter().position(|n| n == name).map(|i| i + 1)
    }

    /// `m·p^n`.
    pub fn total_order(&self) -> u64 {
        self.m * self.p().pow(self.n_steps() as u32)
    }

    pub fn wild_order(&self) -> u64 {
        self.p().pow(self.n_steps() as u32)
    }

    pub fn identity(&self) -> Automorphism {
        Automorphism {
            x_scale: 1,
            images: (1..self.nvars()).map(|k| MPoly::var(self.nvars(), k)).collect(),
        }
    }

    fn reduce(&self, poly: &MPoly) -> MPoly {
        poly.reduce(&self.rhs, self.p(), &self.field)
    }

    /// Checks that the action respects every defining equation and fixes
    /// `x^m`, and returns it in normal form.
    pub fn automorphism(&self, g: &GeneratorAction) -> Result<Automorphism> {
        let f = &self.field;
        if g.images.len() != self.n_steps() {
            return Err(Error::InvalidTower(format!(
                "generator {} has {} images for {} steps",
                g.name,
                g.images.len(),
                self.n_steps()
            )));
        }
        if g.x_scale == 0 || f.raw_pow(g.x_scale, self.m) != 1 {
            return Err(Error::InvalidTower(format!(
                "generator {}: x scale {} is not an m-th root of unity",
                g.name,
                f.element(g.x_scale)
            )));
        }
        let mut images = Vec::with_capacity(g.images.len());
        for (k, (scale, shift)) in g.images.iter().enumerate() {
            if *scale == 0 {
                return Err(Error::InvalidTower(format!("generator {}: zero scale", g.name)));
            }
            check_earlier(shift, k + 1, &self.names[k])?;
            let img = MPoly::var(self.nvars(), k + 1).scale(*scale, f).add(shift, f);
            images.push(self.reduce(&img));
        }
        let auto = Automorphism {
            x_scale: g.x_scale,
            images,
        };
        for k in 0..self.n_steps() {
            let img = &auto.images[k];
            let lhs = img.pow(self.p() as u32, f).sub(img, f);
            let rhs = self.rhs[k].substitute(auto.x_scale, &auto.images, f);
            if !self.reduce(&lhs.sub(&rhs, f)).is_zero() {
                return Err(Error::InvalidTower(format!(
                    "generator {} does not preserve the equation of {}",
                    g.name, self.names[k]
                )));
            }
        }
        Ok(auto)
    }

    /// `g ∘ h`.
    pub fn compose(&self, g: &Automorphism, h: &Automorphism) -> Automorphism {
        let f = &self.field;
        Automorphism {
            x_scale: f.mul(g.x_scale, h.x_scale),
            images: h
                .images
                .iter()
                .map(|img| self.reduce(&img.substitute(g.x_scale, &g.images, f)))
                .collect(),
        }
    }

    /// Closes the generators under composition. The identity comes first;
    /// the rest follow in breadth-first order. Fails unless the closure has
    /// exactly `m·p^n` elements.
    pub fn group(&self, generators: &[GeneratorAction]) -> Result<Vec<Automorphism>> {
        let gens = generators
            .iter()
            .map(|g| self.automorphism(g))
            .collect::<Result<Vec<_>>>()?;
        let expected = self.total_order() as usize;
        let id = self.identity();
        let mut seen: HashSet<Automorphism> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let next = self.compose(g, &e);
                if seen.insert(next.clone()) {
                    if seen.len() > expected {
                        return Err(Error::InvalidTower(format!(
                            "generators produce more than {expected} automorphisms"
                        )));
                    }
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        if order.len() != expected {
            return Err(Error::InvalidTower(format!(
                "generators produce a group of order {}, expected {expected}",
                order.len()
            )));
        }
        Ok(order)
    }

    /// Generators for towers whose right-hand sides depend on `x` alone:
    /// one translation `v_k -> v_k + 1` per step and, for `m > 1`, the tame
    /// generator `x -> zeta_m x, v_k -> s_k v_k` with `R_k(zeta_m x) =
    /// s_k R_k(x)` and `s_k` in `F_p^*`.
    pub fn default_generators(&self) -> Result<Vec<GeneratorAction>> {
        let f = &self.field;
        let n = self.n_steps();
        let nv = self.nvars();
        for (name, r) in self.names.iter().zip(&self.rhs) {
            if r.used_vars().iter().any(|&i| i != 0) {
                return Err(Error::InvalidTower(format!(
                    "right-hand side of {name} involves earlier step variables; generators must be given"
                )));
            }
        }
        let mut gens = Vec::new();
        if self.m > 1 {
            let zeta = f.root_of_unity(self.m)?.raw();
            let mut images = Vec::with_capacity(n);
            for (name, r) in self.names.iter().zip(&self.rhs) {
                let moved = r.substitute(zeta, &[], f);
                let s = (1..self.p() as Raw)
                    .find(|&s| r.scale(s, f) == moved)
                    .ok_or_else(|| {
                        Error::InvalidTower(format!(
                            "{name}: R(zeta x) is not an F_p-multiple of R(x); generators must be given"
                        ))
                    })?;
                images.push((s, MPoly::zero(nv)));
            }
            gens.push(GeneratorAction {
                name: "tame".into(),
                x_scale: zeta,
                images,
            });
        }
        for k in 0..n {
            let images = (0..n)
                .map(|i| {
                    let shift = if i == k {
                        MPoly::constant(nv, 1)
                    } else {
                        MPoly::zero(nv)
                    };
                    (1, shift)
                })
                .collect();
            gens.push(GeneratorAction {
                name: format!("shift_{}", self.names[k]),
                x_scale: 1,
                images,
            });
        }
        Ok(gens)
    }

    pub fn element(&self, raw: Raw) -> FieldElement {
        self.field.element(raw)
    }
}

fn check_earlier(poly: &MPoly, k: usize, name: &str) -> Result<()> {
    for (e, _) in poly.terms() {
        if e.iter().skip(k).any(|&x| x != 0) {
            return Err(Error::InvalidTower(format!(
                "expression for {name} uses {name} or a later variable"
            )));
        }
        if e.iter().skip(1).any(|&x| x < 0) {
            return Err(Error::InvalidTower(format!(
                "expression for {name} has a negative power of a step variable"
            )));
        }
    }
    Ok(())
}

/// A coefficient: an integer or a coordinate vector in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Int(i64),
    Coords(Vec<u32>),
}

impl CoeffJson {
    pub fn to_raw(&self, field: &Field) -> Result<Raw> {
        match self {
            CoeffJson::Int(n) => Ok(field.raw_from_int(*n)),
            CoeffJson::Coords(c) => field.raw_from_coeffs(c),
        }
    }

    pub fn from_raw(field: &Field, raw: Raw) -> Self {
        if field.degree() == 1 {
            CoeffJson::Int(raw as i64)
        } else {
            CoeffJson::Coords(field.raw_coeffs(raw))
        }
    }
}

/// `{"c": coeff, "pow": {"var": exponent, ...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub c: CoeffJson,
    #[serde(default)]
    pub pow: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepJson {
    pub var: String,
    pub rhs: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<CoeffJson>,
    #[serde(default)]
    pub shift: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_scale: Option<CoeffJson>,
    #[serde(default)]
    pub images: BTreeMap<String, ImageJson>,
}

/// Wire form of a tower. `field` defaults to `F_p`, `m` to 1; without
/// `generators` the defaults of [`TowerSpec::default_generators`] apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerJson {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
    #[serde(default = "one")]
    pub m: u64,
    pub steps: Vec<StepJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorJson>>,
}

fn one() -> u64 {
    1
}

fn parse_terms(
    terms: &[TermJson],
    field: &Field,
    vars: &BTreeMap<&str, usize>,
    nvars: usize,
) -> Result<MPoly> {
    let mut poly = MPoly::zero(nvars);
    for t in terms {
        let mut e = vec![0i64; nvars];
        for (name, &exp) in &t.pow {
            let &i = vars
                .get(name.as_str())
                .ok_or_else(|| Error::InvalidTower(format!("unknown variable {name:?}")))?;
            e[i] += exp;
        }
        poly.add_term(field, e, t.c.to_raw(field)?);
    }
    Ok(poly)
}

impl TowerJson {
    pub fn to_spec(&self) -> Result<(TowerSpec, Option<Vec<GeneratorAction>>)> {
        let field = match self.field {
            Some(fj) => fj.to_field()?,
            None => Field::prime(self.p)?,
        };
        if field.characteristic() != self.p {
            return Err(Error::InvalidTower(format!(
                "field characteristic {} differs from p = {}",
                field.characteristic(),
                self.p
            )));
        }
        let nvars = self.steps.len() + 1;
        let mut vars: BTreeMap<&str, usize> = BTreeMap::from([("x", 0)]);
        for (k, s) in self.steps.iter().enumerate() {
            vars.insert(s.var.as_str(), k + 1);
        }
        let steps = self
            .steps
            .iter()
            .map(|s| Ok((s.var.clone(), parse_terms(&s.rhs, &field, &vars, nvars)?)))
            .collect::<Result<Vec<_>>>()?;
        let spec = TowerSpec::new(&field, self.m, steps)?;
        let gens = match &self.generators {
            None => None,
            Some(list) => Some(
                list.iter()
                    .map(|g| {
                        for name in g.images.keys() {
                            if spec.var_index(name).is_none_or(|i| i == 0) {
                                return Err(Error::InvalidTower(format!(
                                    "generator {}: no step variable {name:?}",
                                    g.name
                                )));
                            }
                        }
                        let x_scale = match &g.x_scale {
                            Some(c) => c.to_raw(&field)?,
                            None => 1,
                        };
                        let images = spec
                            .names()
                            .iter()
                            .map(|name| match g.images.get(name) {
                                None => Ok((1, MPoly::zero(nvars))),
                                Some(img) => Ok((
                                    match &img.scale {
                                        Some(c) => c.to_raw(&field)?,
                                        None => 1,
                                    },
                                    parse_terms(&img.shift, &field, &vars, nvars)?,
                                )),
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(GeneratorAction {
                            name: g.name.clone(),
                            x_scale,
                            images,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok((spec, gens))
    }
}
