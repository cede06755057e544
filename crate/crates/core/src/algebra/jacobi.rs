use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AlgebraError, AlgebraSpec, BasisSymbol, IndexDomain, LinComb};
use crate::group::GroupElement;

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn jacobi_defect(
    alg: &AlgebraSpec,
    x: &BasisSymbol,
    y: &BasisSymbol,
    z: &BasisSymbol,
) -> Result<LinComb, AlgebraError> {
    let mut out = alg.bracket_lin(&LinComb::basis(x.clone()), &alg.bracket(y, z)?)?;
    out = out.add(&alg.bracket_lin(&LinComb::basis(y.clone()), &alg.bracket(z, x)?)?);
    out = out.add(&alg.bracket_lin(&LinComb::basis(z.clone()), &alg.bracket(x, y)?)?);
    Ok(out)
}

/// Ranges random basis symbols are drawn from.
#[derive(Clone, Debug)]
pub struct SampleRange {
    pub degree: (i64, i64),
    pub nat_index: (i64, i64),
    pub int_index: (i64, i64),
}

impl Default for SampleRange {
    fn default() -> Self {
        SampleRange {
            degree: (-5, 5),
            nat_index: (0, 4),
            int_index: (-4, 4),
        }
    }
}

/// Draws a random symbol of a random family (uniform over families).
pub fn random_symbol(alg: &AlgebraSpec, range: &SampleRange, rng: &mut impl Rng) -> BasisSymbol {
    let fams: Vec<_> = alg.family_ids().collect();
    let f = fams[rng.gen_range(0..fams.len())];
    let coords: Vec<i64> = (0..alg.rank())
        .map(|_| rng.gen_range(range.degree.0..=range.degree.1))
        .collect();
    symbol_at(alg, f, GroupElement::new(&coords), range, rng)
}

fn symbol_at(
    alg: &AlgebraSpec,
    f: super::FamilyId,
    degree: GroupElement,
    range: &SampleRange,
    rng: &mut impl Rng,
) -> BasisSymbol {
    let fam = alg.family(f);
    if fam.is_central() {
        return BasisSymbol::central(f, alg.rank());
    }
    let index = fam.index_domain().map(|d| match d {
        IndexDomain::Nat => rng.gen_range(range.nat_index.0..=range.nat_index.1),
        IndexDomain::Int => rng.gen_range(range.int_index.0..=range.int_index.1),
    });
    BasisSymbol::new(f, degree, index)
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobiWitness {
    pub x: String,
    pub y: String,
    pub z: String,
    pub defect: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobiAudit {
    pub algebra: String,
    pub samples: usize,
    pub seed: u64,
    pub prng: &'static str,
    pub zero_defects: usize,
    pub failures: Vec<JacobiWitness>,
    /// How often each family occurred among sampled arguments.
    pub coverage: BTreeMap<String, usize>,
}

impl JacobiAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const PRNG_NAME: &str = "ChaCha8Rng::seed_from_u64";

/// Checks the Jacobi identity on `samples` random graded triples. Half of the
/// triples have total degree zero, so that central cocycle channels are hit.
pub fn jacobi_audit(
    alg: &AlgebraSpec,
    samples: usize,
    seed: u64,
    range: &SampleRange,
) -> Result<JacobiAudit, AlgebraError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graded = alg.graded_families();
    let mut coverage: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut zero = 0;
    let pick = |rng: &mut ChaCha8Rng, degree: Option<GroupElement>| {
        let f = graded[rng.gen_range(0..graded.len())];
        let degree = degree.unwrap_or_else(|| {
            let c: Vec<i64> = (0..alg.rank())
                .map(|_| rng.gen_range(range.degree.0..=range.degree.1))
                .collect();
            GroupElement::new(&c)
        });
        symbol_at(alg, f, degree, range, rng)
    };
    for _ in 0..samples {
        let x = pick(&mut rng, None);
        let y = pick(&mut rng, None);
        let balance = rng.gen_bool(0.5);
        let z = pick(&mut rng, balance.then(|| (&x.degree + &y.degree).gneg()));
        for s in [&x, &y, &z] {
            *coverage
                .entry(alg.family(s.family).name.clone())
                .or_default() += 1;
        }
        let d = jacobi_defect(alg, &x, &y, &z)?;
        if d.is_zero() {
            zero += 1;
        } else {
            failures.push(JacobiWitness {
                x: alg.format_symbol(&x),
                y: alg.format_symbol(&y),
                z: alg.format_symbol(&z),
                defect: alg.format_lincomb(&d),
            });
        }
    }
    Ok(JacobiAudit {
        algebra: alg.name().to_string(),
        samples,
        seed,
        prng: PRNG_NAME,
        zero_defects: zero,
        failures,
        coverage,
    })
}
