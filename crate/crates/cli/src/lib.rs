//! JSON-in, JSON-out commands behind the `ramify` binary.
//!
//! Every command reads one document and returns one JSON value. Keys are
//! emitted sorted, so equal inputs give byte-identical outputs.

use serde::Deserialize;
use serde_json::{json, Value};

use ramify_core::ascover::{CoverJson, FieldJson};
use ramify_core::moduli::{self, DimensionReport};
use ramify_core::ramfilt::{FiltrationJson, RamFiltration, ReducedFiltration, ReducedPiece};
use ramify_core::tower::quaternion::{equiramified_family, sweep};
use ramify_core::tower::{
    analytic_lower_jumps, evaluate_quaternion_fiber, genus_rh, oracle_lower_jumps, p_rank_ds,
    TowerJson, DS_VARIANT,
};
use ramify_core::gf::{prime_power, Field};
use ramify_core::{Error, Execution, Rational};

/// Exit status 1: the document parsed but describes an invalid object.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status 2: the document is not valid JSON or does not match the
/// schema.
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Domain(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Domain(_) => EXIT_DOMAIN,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Parse(m) => ("parse", m.clone()),
            Failure::Domain(e) => (e.kind(), e.to_string()),
        };
        json!({"error": {"kind": kind, "message": message}})
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

pub type Outcome = Result<Value, Failure>;

fn parse<T: for<'de> Deserialize<'de>>(input: &str) -> Result<T, Failure> {
    serde_json::from_str(input).map_err(|e| Failure::Parse(e.to_string()))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn rational(r: Rational) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        json!([r.numer(), r.denom()])
    }
}

pub fn standard_form(input: &str) -> Outcome {
    let doc: CoverJson = parse(input)?;
    let cover = doc.to_cover()?;
    let sf = cover.standard_form();
    let mut out = json!({"standard_form": to_value(&sf.to_json())});
    if sf.is_zero() {
        out["connected"] = json!(false);
        return Ok(out);
    }
    match cover.conductor() {
        Ok(s) => out["conductor"] = json!(s),
        Err(Error::Disconnected) => {}
        Err(e) => return Err(e.into()),
    }
    match cover.is_connected() {
        Ok(c) => out["connected"] = json!(c),
        Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToUpper,
    ToLower,
}

pub fn jumps(input: &str, direction: Direction) -> Outcome {
    let doc: FiltrationJson = parse(input)?;
    let f: RamFiltration = doc.to_filtration()?;
    let converted = match direction {
        Direction::ToUpper => f.lower_to_upper()?,
        Direction::ToLower => f.upper_to_lower()?,
    };
    let with_mult = converted.jumps_with_multiplicity()?;
    Ok(json!({
        "filtration": to_value(&converted.to_json()),
        "jumps": with_mult.into_iter().map(rational).collect::<Vec<_>>(),
    }))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Structure {
    pub abelian: bool,
    pub ordinary: bool,
    pub reducible: bool,
}

/// A reduced filtration, plus the upper jumps of each cyclic factor for
/// the abelian rule.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimensionDoc {
    #[serde(default = "one")]
    tame: u64,
    pieces: Vec<ReducedPiece>,
    #[serde(default)]
    cyclic_factors: Option<Vec<Vec<i64>>>,
}

fn one() -> u64 {
    1
}

pub fn dimension(input: &str, structure: Structure, exec: Execution) -> Outcome {
    let doc: DimensionDoc = parse(input)?;
    let reduced = ReducedFiltration::new(doc.tame, doc.pieces)?;
    let mut report: DimensionReport = moduli::dim_bounds_with(exec, &reduced)?;
    let rules = [structure.abelian, structure.ordinary, structure.reducible];
    if rules.iter().filter(|&&r| r).count() > 1 {
        return Err(Error::InvalidDatum("choose at most one of abelian, ordinary, reducible".into()).into());
    }
    let p = reduced
        .characteristic()
        .ok_or_else(|| Error::InvalidDatum("no wild pieces".into()))?;
    if structure.abelian {
        let factors = doc.cyclic_factors.ok_or_else(|| {
            Error::InvalidDatum("the abelian rule needs \"cyclic_factors\"".into())
        })?;
        let d = moduli::dim_abelian(p, &factors)?;
        report = report.with_exact(d, "abelian")?;
    } else if structure.ordinary {
        let (_, e) = prime_power(reduced.wild_order())
            .ok_or_else(|| Error::InvalidDatum("wild part is not a p-group".into()))?;
        let e = e as u64;
        let expected = moduli::ordinary_pieces(p, e, reduced.tame)?;
        if expected != reduced.pieces {
            return Err(Error::InvalidDatum(
                "pieces are not the ordinary data for this group order".into(),
            )
            .into());
        }
        let d = moduli::dim_ordinary(p, e, reduced.tame)?;
        report = report.with_exact(d, "ordinary")?;
    } else if structure.reducible {
        let d = moduli::dim_reducible(&reduced.pieces, reduced.tame)?;
        report = report.with_exact(d, "reducible")?;
    }
    Ok(to_value(&report))
}

pub fn verify(input: &str, precision: usize) -> Outcome {
    let doc: TowerJson = parse(input)?;
    let (spec, gens) = doc.to_spec()?;
    let gens = match gens {
        Some(g) => g,
        None => spec.default_generators()?,
    };
    let oracle = oracle_lower_jumps(&spec, &gens, precision)?;
    let analytic = analytic_lower_jumps(&spec)?;
    let oracle_jumps = oracle.filtration.jumps_with_multiplicity()?;
    let analytic_jumps = match &analytic {
        Some(f) => Some(f.jumps_with_multiplicity()?),
        None => None,
    };
    let agree = analytic.as_ref().map(|f| *f == oracle.filtration);

    // the wild part is a p-group cover of the x-line branched at x = 0 only;
    // positive lower jumps already carry p-group orders
    let wild = spec.wild_order();
    let breaks: Vec<(i64, u64)> = oracle
        .filtration
        .breaks()
        .iter()
        .map(|b| (b.jump.to_integer(), b.order))
        .collect();
    let wild_filtration = RamFiltration::lower(wild, 1, &breaks);
    let genus = genus_rh(wild, &wild_filtration)?;
    let p_rank = p_rank_ds(wild, 0, &[wild])?;
    Ok(json!({
        "oracle_jumps": oracle_jumps.into_iter().map(rational).collect::<Vec<_>>(),
        "analytic_jumps": analytic_jumps.map(|j| j.into_iter().map(rational).collect::<Vec<_>>()),
        "agree": agree,
        "genus": genus,
        "p_rank": p_rank,
        "p_rank_variant": DS_VARIANT,
        "oracle": {
            "precision": oracle.precision,
            "valid_precision": oracle.valid_precision,
            "step_conductors": oracle.steps.iter().map(|s| s.conductor).collect::<Vec<_>>(),
            "filtration": to_value(&oracle.filtration.to_json()),
        },
    }))
}

pub fn quaternion_demo(field_size: u64, do_sweep: bool, exec: Execution) -> Outcome {
    let (p, a) = prime_power(field_size)
        .ok_or_else(|| Error::InvalidDatum(format!("{field_size} is not a prime power")))?;
    if p != 2 {
        return Err(Error::Unsupported("the quaternion family lives in characteristic 2".into()).into());
    }
    let field = Field::new(p, a)?;
    let field_json = to_value(&FieldJson { p, a });
    if !do_sweep {
        let z = field.zero();
        let fiber = evaluate_quaternion_fiber(&z, &z, &z)?;
        return Ok(json!({"field": field_json, "fibers": [to_value(&fiber)]}));
    }
    let a3s: Vec<_> = field.elements().collect();
    let fibers = sweep(&field, &a3s, exec)?;
    let family = equiramified_family(&field, exec)?;
    let count = |pred: &dyn Fn(&ramify_core::tower::FiberReport) -> bool| {
        fibers.iter().filter(|r| pred(r)).count()
    };
    Ok(json!({
        "field": field_json,
        "fibers": fibers.iter().map(to_value).collect::<Vec<_>>(),
        "summary": {
            "fibers": fibers.len(),
            "disconnected": count(&|r| !r.connected),
            "genus_1": count(&|r| r.genus == Some(1)),
            "genus_2": count(&|r| r.genus == Some(2)),
            "a3_dependent_pairs": ramify_core::tower::quaternion::a3_dependence(&fibers).len(),
        },
        "equiramified_family": to_value(&family),
    }))
}
