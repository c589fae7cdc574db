//! End-to-end invariant suites behind `nsindex verify`.

use clap::ValueEnum;
use serde::Serialize;

use nsindex::arith::{admissible_complex_indices, cyclotomic_poly, euler_phi, residue_partition};
use nsindex::charspace::special_subspace;
use nsindex::discform::{build_disc_space, nonsplit_isotropic_count, SELF_CHECK_COUNT_BUDGET};
use nsindex::latred::{identity, mat_mul, named_lattice, LATTICE_NAMES};
use nsindex::oracle::{enumerate_index, DEFAULT_ORACLE_BUDGET};
use nsindex::strata::{nonsymplectic_index, table1, ZeroPattern};
use nsindex::{field_create, Lattice};

use crate::CliError;

/// Elements checked exhaustively up to this field size, by stride above it.
const FIELD_SAMPLE: u128 = 1 << 12;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fields,
    Discform,
    Strata,
    Arith,
    Lattices,
    Oracle,
    All,
}

pub struct Params {
    pub p: u64,
    pub sigma: usize,
    pub d: usize,
    pub quick: bool,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub count: u128,
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_count: Option<u128>,
}

struct Collector {
    suite: Suite,
    checks: Vec<Check>,
    zero_count: Option<u128>,
}

impl Collector {
    fn push(&mut self, name: &str, passed: bool, count: u128) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            passed,
            count,
        });
    }
}

pub fn run(suite: Suite, params: &Params) -> Result<Outcome, CliError> {
    let mut c = Collector {
        suite,
        checks: Vec::new(),
        zero_count: None,
    };
    let suites: &[Suite] = match suite {
        Suite::All => &[
            Suite::Fields,
            Suite::Discform,
            Suite::Strata,
            Suite::Arith,
            Suite::Lattices,
            Suite::Oracle,
        ],
        _ => std::slice::from_ref(&suite),
    };
    for &s in suites {
        c.suite = s;
        match s {
            Suite::Fields => fields(&mut c, params)?,
            Suite::Discform => discform(&mut c, params)?,
            Suite::Strata => strata(&mut c, params)?,
            Suite::Arith => arith(&mut c, params),
            Suite::Lattices => lattices(&mut c, params)?,
            Suite::Oracle => oracle(&mut c, params)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(Outcome {
        suite,
        passed: c.checks.iter().all(|x| x.passed),
        checks: c.checks,
        zero_count: c.zero_count,
    })
}

fn fields(c: &mut Collector, params: &Params) -> Result<(), CliError> {
    let f = field_create(params.p, params.d)?;
    let q = f.size();
    let stride = (q / FIELD_SAMPLE).max(1);
    let sample: Vec<_> = (0..q)
        .step_by(stride as usize)
        .map(|i| f.from_index(i))
        .collect();
    let n = sample.len() as u128;

    let fermat = sample.iter().all(|x| x.pow(q) == *x);
    c.push("fermat", fermat, n);
    let frob = sample
        .iter()
        .all(|x| x.frobenius(params.d as i64) == *x && x.frobenius(1) == x.pow(params.p as u128));
    c.push("frobenius", frob, n);
    let inverse = sample
        .iter()
        .filter(|x| !x.is_zero())
        .all(|x| x.inv().is_ok_and(|y| (x * &y).is_one()));
    c.push("inverse", inverse, n);
    let t = f.generator_t();
    let distributive = sample.iter().zip(sample.iter().rev()).all(|(x, y)| {
        let lhs = x * &(y + &t);
        let rhs = &(x * y) + &(x * &t);
        lhs == rhs
    });
    c.push("distributive", distributive, n);
    let g = f.primitive_element();
    c.push("primitive_order", g.mult_order()? == q - 1, 1);
    Ok(())
}

fn discform(c: &mut Collector, params: &Params) -> Result<(), CliError> {
    let sigmas: Vec<usize> = if params.quick {
        vec![1]
    } else {
        (1..=params.sigma).collect()
    };
    for sigma in sigmas {
        let space = build_disc_space(params.p, sigma, None)?;
        let gram = space.gram();
        let n = gram.len();
        let symmetric = (0..n).all(|i| (0..n).all(|j| gram[i][j] == gram[j][i]));
        c.push(&format!("gram_symmetric_sigma{sigma}"), symmetric, 1);
        let count = space.isotropic_vector_count(SELF_CHECK_COUNT_BUDGET)?;
        let expected = nonsplit_isotropic_count(params.p, sigma);
        c.push(
            &format!("isotropic_count_sigma{sigma}"),
            count == expected,
            count,
        );
        c.zero_count = Some(count);
        let split = space.has_totally_isotropic_subspace(sigma, SELF_CHECK_COUNT_BUDGET)?;
        c.push(&format!("no_isotropic_sigma_space_sigma{sigma}"), !split, 1);
        let k = special_subspace(&space)?;
        c.push(
            &format!("special_characteristic_sigma{sigma}"),
            k.report()?.all_hold(),
            1,
        );
    }
    Ok(())
}

fn strata(c: &mut Collector, params: &Params) -> Result<(), CliError> {
    let rows = table1(Some(params.p));
    c.push("table_rows", rows.len() == 10, rows.len() as u128);
    let mut count = 0u128;
    let mut ok = true;
    for row in &rows {
        let bound = num_bigint::BigUint::from(params.p).pow(row.sigma as u32) + 1u32;
        for s in &row.strata {
            let idx = s.index.clone().expect("numeric table");
            ok &= (&bound % &idx) == 0u32.into() && (&idx % 2u32) == 0u32.into();
            count += 1;
        }
    }
    c.push("index_even_and_divides", ok, count);
    let pattern = ZeroPattern::all_zero(1)?;
    let r = nonsymplectic_index(params.p, 1, &pattern)?;
    c.push("sigma1_is_p_plus_1", r.index == (params.p + 1).into(), 1);
    Ok(())
}

fn arith(c: &mut Collector, params: &Params) {
    let bound = if params.quick { 60 } else { 200 };
    let deg = (1..=bound).all(|n| cyclotomic_poly::<i64>(n).len() as u64 - 1 == euler_phi(n));
    c.push("cyclotomic_degree", deg, bound as u128);
    let max = admissible_complex_indices(20).into_iter().max();
    c.push("max_complex_index", max == Some(66), 1);
    let part = residue_partition(38);
    let covered = part.supersingular.values().map(Vec::len).sum::<usize>()
        + part.finite_height.len()
        + part.non_units.len();
    c.push("residue_partition_38", covered == 38, 38);
}

fn lattices(c: &mut Collector, params: &Params) -> Result<(), CliError> {
    let mut reflections = 0u128;
    let mut ok = true;
    for name in LATTICE_NAMES {
        let l: Lattice = named_lattice(name)?;
        let disc = l.disc_group();
        c.push(
            &format!("disc_order_{name}"),
            disc.order() == l.det().abs(),
            disc.factors.len() as u128,
        );
        let bound = if l.rank() > 4 || params.quick { 1 } else { 2 };
        let id = identity::<i64>(l.rank());
        for norm in [-2, 2] {
            for v in l.vectors_of_norm(norm, bound) {
                let r = if norm == -2 {
                    l.reflect_minus2(&v)?
                } else {
                    l.reflect_plus2(&v)?
                };
                ok &= l.preserves_gram(&r)
                    && mat_mul(&r, &r) == id
                    && l.acts_trivially_on_discriminant(&r);
                reflections += 1;
            }
        }
    }
    c.push("reflections", ok, reflections);
    Ok(())
}

fn oracle(c: &mut Collector, params: &Params) -> Result<(), CliError> {
    let sigmas: Vec<usize> = if params.quick {
        vec![1]
    } else {
        (1..=params.sigma.min(2)).collect()
    };
    for sigma in sigmas {
        let space = build_disc_space(params.p, sigma, None)?;
        let k = special_subspace(&space)?;
        let report = enumerate_index(&k, DEFAULT_ORACLE_BUDGET)?;
        let criterion = nonsymplectic_index(params.p, sigma, &ZeroPattern::all_zero(sigma)?)?;
        c.push(
            &format!("special_agrees_sigma{sigma}"),
            criterion.index == report.index.into(),
            report.group_size,
        );
    }
    Ok(())
}
