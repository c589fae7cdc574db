//! Acceptance criteria. Run with `cargo test -p nsindex --test acceptance -- --nocapture`
//! to see one line per criterion.
//!
//! Criteria 7 and 8 state facts that do not hold as written. Their lines print
//! FAIL with the reason; the test asserts that the failure is exactly the
//! documented one and that the corrected statement holds.

use std::sync::Arc;
use std::time::{Duration, Instant};

use nsindex::arith::{
    admissible_complex_indices, classify_reduction, cyclotomic_poly, euler_phi,
    residue_classes_for_artin, residue_partition, ReductionOutcome,
};
use nsindex::charspace::{
    orbit_factor, search_subspace, special_subspace, zero_pattern, CharSubspace, SearchOptions,
};
use nsindex::discform::{build_disc_space, nonsplit_isotropic_count, DiscSpace};
use nsindex::latred::{identity, mat_mul, named_lattice, LATTICE_NAMES};
use nsindex::oracle::{eigenvalue_constraints, enumerate_index, IsometryFrame, OracleReport};
use nsindex::strata::{nonsymplectic_index, render_table, table1, ZeroPattern};
use nsindex::{FieldElement, Lattice};

const GOLDEN_TABLE: &str = include_str!("golden/table1.txt");

#[derive(Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
}

struct Line {
    id: u32,
    title: &'static str,
    status: Status,
    detail: String,
    elapsed: Duration,
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn timed(id: u32, title: &'static str, f: impl FnOnce() -> (Status, String)) -> Line {
    let start = Instant::now();
    let (status, detail) = f();
    Line {
        id,
        title,
        status,
        detail,
        elapsed: start.elapsed(),
    }
}

struct Subject {
    label: String,
    k: CharSubspace,
    report: OracleReport,
}

fn subject(label: &str, k: CharSubspace) -> Subject {
    let report = enumerate_index(&k, 1 << 20).expect("oracle");
    Subject {
        label: label.to_string(),
        k,
        report,
    }
}

fn special(p: u64, sigma: usize) -> CharSubspace {
    special_subspace(&build_disc_space(p, sigma, None).unwrap()).unwrap()
}

fn generic(seed: u64) -> CharSubspace {
    let space = build_disc_space(5, 2, Some(8)).unwrap();
    let opts = SearchOptions {
        seed,
        ..SearchOptions::default()
    };
    search_subspace(&space, &ZeroPattern::generic(2).unwrap(), opts)
        .unwrap()
        .found
        .expect("generic subspace within budget")
}

fn pow_mod(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    r
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smallest m >= 1 with r^m = -1 mod n, by direct search.
fn brute_artin(r: u64, n: u64) -> Option<u64> {
    (1..=n).find(|&m| pow_mod(r, m, n) == n - 1)
}

fn criterion1() -> (Status, String) {
    let start = Instant::now();
    let rendered = render_table(&table1(None));
    let elapsed = start.elapsed();
    let ok = rendered == GOLDEN_TABLE && elapsed < Duration::from_secs(1);
    let rows = table1(None).len();
    (
        pass_if(ok),
        format!("{rows} rows, golden match {}", rendered == GOLDEN_TABLE),
    )
}

fn criterion2() -> (Status, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for p in [5u64, 7, 11] {
        let start = Instant::now();
        let r = enumerate_index(&special(p, 1), 1 << 20).unwrap();
        let c = nonsymplectic_index(p, 1, &ZeroPattern::all_zero(1).unwrap()).unwrap();
        ok &= r.index == (p + 1) as u128
            && c.index == (p + 1).into()
            && start.elapsed() < Duration::from_secs(5);
        parts.push(format!("p={p}: {}", r.index));
    }
    (pass_if(ok), parts.join(", "))
}

fn criterion3(special52: &Subject, generic52: &Subject) -> (Status, String) {
    let a1_nonzero = !generic52.k.a()[0].is_zero();
    let ok = special52.report.index == 26 && a1_nonzero && generic52.report.index == 2;
    (
        pass_if(ok),
        format!(
            "special {}, generic (a_1 != 0: {a1_nonzero}) {}",
            special52.report.index, generic52.report.index
        ),
    )
}

fn criterion4(subjects: &[Subject]) -> (Status, String) {
    let mut ok = true;
    for s in subjects {
        let r = &s.report;
        let bound = (r.p as u128).pow(r.sigma as u32) + 1;
        ok &= r.contains_minus_identity
            && r.kept_exponents.contains(&(r.group_size / 2))
            && r.index % 2 == 0
            && bound.is_multiple_of(r.index);
    }
    (pass_if(ok), format!("{} oracle runs", subjects.len()))
}

fn criterion5() -> (Status, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, sigma) in [(5u64, 1usize), (7, 1), (5, 2)] {
        let space = build_disc_space(p, sigma, None).unwrap();
        let count = space.isotropic_vector_count(1 << 24).unwrap();
        let expected = p.pow(2 * sigma as u32 - 1) - p.pow(sigma as u32) + p.pow(sigma as u32 - 1);
        ok &= count == expected as u128 && count == nonsplit_isotropic_count(p, sigma);
        ok &= !space
            .has_totally_isotropic_subspace(sigma, 1 << 24)
            .unwrap();
        parts.push(format!("({p},{sigma}): {count}"));
    }
    (pass_if(ok), parts.join(", "))
}

/// Block shape of the Gram matrix in v_1..v_2σ, checked from scratch.
fn check_vbasis_shape(k: &CharSubspace) -> bool {
    let h = k.gram_in_vbasis().unwrap();
    let s = k.sigma();
    let zero = k.space().working_field().zero();
    let diag_blocks_zero =
        (0..2 * s).all(|j| (0..2 * s).all(|l| (j < s) != (l < s) || *h.get(j, l) == zero));
    let a = |j: usize, l: usize| h.get(j, s + l).clone();
    let unipotent = (0..s).all(|j| a(j, j).is_one() && (0..j).all(|l| a(j, l).is_zero()));
    let symmetric = (0..s).all(|j| (0..s).all(|l| *h.get(s + l, j) == a(j, l)));
    let twisted = (1..s).all(|j| (j..s).all(|l| a(j, l) == a(0, l - j).frobenius(-(j as i64))));
    let first_row = (1..s).all(|l| a(0, l) == k.a()[l - 1]);
    diag_blocks_zero && unipotent && symmetric && twisted && first_row
}

fn criterion6(subjects: &[Subject]) -> (Status, String) {
    let shapes = subjects.iter().all(|s| check_vbasis_shape(&s.k));
    let special_identity = subjects
        .iter()
        .filter(|s| s.label.starts_with("special"))
        .all(|s| {
            let h = s.k.gram_in_vbasis().unwrap();
            let n = s.k.sigma();
            (0..n).all(|j| (0..n).all(|l| h.get(j, n + l).is_one() == (j == l)))
        });
    (
        pass_if(shapes && special_identity),
        format!(
            "{} subspaces, special A = I: {special_identity}",
            subjects.len()
        ),
    )
}

fn mu(space: &DiscSpace) -> Vec<FieldElement> {
    let n = (space.p() as u128).pow(space.sigma() as u32) + 1;
    let zeta = space.working_field().root_of_unity(n).unwrap();
    (0..n).map(|e| zeta.pow(e)).collect()
}

struct PsiFindings {
    exact: bool,
    literal_agrees_everywhere: bool,
    literal_agreement_count: usize,
    reparametrized: bool,
    same_orbits: bool,
    checked: usize,
}

/// Rescale v_1 by every ξ in μ_(p^σ+1) and compare the new a-vector against
/// ξ·F^-(σ+i)(ξ)·a_i and against the literal ξ^(p^(σ+i)+1)·a_i.
fn psi_findings(ks: &[&CharSubspace]) -> PsiFindings {
    let mut f = PsiFindings {
        exact: true,
        literal_agrees_everywhere: true,
        literal_agreement_count: 0,
        reparametrized: true,
        same_orbits: true,
        checked: 0,
    };
    for k in ks {
        let space = k.space();
        let sigma = space.sigma();
        let p = space.p() as u128;
        let group = mu(space);
        let mut ours_set = Vec::new();
        let mut literal_set = Vec::new();
        for xi in &group {
            let (c, a_new) = k.rescaled_a(xi);
            f.exact &= c.is_one();
            let mut literal_all = true;
            for i in 1..sigma {
                let computed = xi * &xi.frobenius(-((sigma + i) as i64));
                let literal = xi.pow(p.pow((sigma + i) as u32) + 1);
                f.exact &= computed == orbit_factor(space, xi, i);
                f.exact &= a_new[i - 1] == &computed * &k.a()[i - 1];
                literal_all &= a_new[i - 1] == &literal * &k.a()[i - 1];
                let conj = xi.frobenius((sigma + i) as i64);
                f.reparametrized &= literal == orbit_factor(space, &conj, i);
                ours_set.push(computed.canonical_index());
                literal_set.push(literal.canonical_index());
            }
            f.literal_agrees_everywhere &= literal_all;
            f.literal_agreement_count += literal_all as usize;
            f.checked += 1;
        }
        ours_set.sort_unstable();
        ours_set.dedup();
        literal_set.sort_unstable();
        literal_set.dedup();
        f.same_orbits &= ours_set == literal_set;
    }
    f
}

fn criterion7(findings: &PsiFindings) -> (Status, String) {
    (
        pass_if(findings.exact && findings.literal_agrees_everywhere),
        format!(
            "{} rescalings; factor xi*F^-(sigma+i)(xi) exact: {}; literal xi^(p^(sigma+i)+1) matches for {} of {}; \
             literal equals the computed factor at F^(sigma+i)(xi): {}; same multiplier set: {}",
            findings.checked,
            findings.exact,
            findings.literal_agreement_count,
            findings.checked,
            findings.reparametrized,
            findings.same_orbits
        ),
    )
}

const SPEC_M9: [u64; 6] = [3, 11, 13, 15, 21, 29];

fn criterion8() -> (Status, String) {
    let start = Instant::now();
    let m3 = residue_classes_for_artin(38, 3);
    let m1 = residue_classes_for_artin(38, 1);
    let m9 = residue_classes_for_artin(38, 9);
    let invalid = classify_reduction(38, 19).outcome == ReductionOutcome::Invalid;
    let brute: Vec<u64> = (1..38)
        .filter(|&r| gcd(r, 38) == 1 && brute_artin(r, 38) == Some(9))
        .collect();
    let note = residue_partition(38)
        .notes
        .into_iter()
        .find(|n| n.artin == 9)
        .expect("printed list note");
    let ok = m3 == [27, 31]
        && m1 == [37]
        && invalid
        && m9 == brute
        && !note.agrees
        && m9 == SPEC_M9
        && start.elapsed() < Duration::from_secs(1);
    (
        pass_if(ok),
        format!(
            "m=3 {m3:?}, m=1 {m1:?}, 19 invalid: {invalid}; m=9 computed {m9:?} (direct search {brute:?}), \
             expected {SPEC_M9:?} but 11^3 = {} mod 38 and 33^9 = {} mod 38; printed list note: extra {:?}, missing {:?}",
            pow_mod(11, 3, 38),
            pow_mod(33, 9, 38),
            note.extra_in_printed,
            note.missing_from_printed
        ),
    )
}

fn criterion9() -> (Status, String) {
    let max = admissible_complex_indices(20).into_iter().max();
    let phi66 = euler_phi(66);
    let degrees = (1..=200u64).all(|n| {
        let direct = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
        cyclotomic_poly::<i64>(n).len() as u64 - 1 == direct && euler_phi(n) == direct
    });
    (
        pass_if(max == Some(66) && phi66 == 20 && degrees),
        format!("max index {max:?}, phi(66) = {phi66}, degrees up to 200: {degrees}"),
    )
}

fn criterion10() -> (Status, String) {
    let mut count = 0;
    let mut ok = true;
    for name in LATTICE_NAMES {
        let l: Lattice = named_lattice(name).unwrap();
        let bound = if l.rank() > 4 { 1 } else { 2 };
        let id = identity::<i64>(l.rank());
        for norm in [-2, 2] {
            for v in l.vectors_of_norm(norm, bound) {
                let r = if norm == -2 {
                    l.reflect_minus2(&v).unwrap()
                } else {
                    l.reflect_plus2(&v).unwrap()
                };
                ok &= mat_mul(&r, &r) == id
                    && l.preserves_gram(&r)
                    && l.acts_trivially_on_discriminant(&r);
                count += 1;
            }
        }
    }
    (
        pass_if(ok && count > 0),
        format!("{count} reflections over {} lattices", LATTICE_NAMES.len()),
    )
}

fn criterion11(subjects: &[Subject]) -> (Status, String) {
    let mut ok = true;
    let mut checked = 0;
    for s in subjects {
        let space: &Arc<DiscSpace> = s.k.space();
        let sigma = space.sigma();
        let frame = IsometryFrame::new(&s.k).unwrap();
        let zeta = space
            .working_field()
            .root_of_unity(s.report.group_size)
            .unwrap();
        let v1 = &s.k.distinguished_basis()[0];
        let vs = &s.k.distinguished_basis()[sigma];
        for &e in &s.report.kept_exponents {
            let xi = zeta.pow(e);
            let g = frame.build(&xi).unwrap();
            let inv = xi.inv().unwrap();
            ok &= g.apply(v1) == v1.iter().map(|x| x * &xi).collect::<Vec<_>>();
            ok &= g.apply(vs) == vs.iter().map(|x| x * &inv).collect::<Vec<_>>();
            let c = eigenvalue_constraints(&xi, sigma).unwrap();
            if c.m >= 1 {
                let n = c.n as u64;
                let p = space.p() % n;
                let ord = (1..=n).find(|&k| pow_mod(p, k, n) == 1);
                ok &= ord == Some(2 * c.m as u64)
                    && (pow_mod(p, c.m as u64, n) + 1).is_multiple_of(n);
            }
            checked += 1;
        }
    }
    (
        pass_if(ok && checked > 0),
        format!("{checked} kept isometries"),
    )
}

#[test]
fn acceptance_criteria() {
    let build_start = Instant::now();
    let mut subjects = vec![
        subject("special (5,1)", special(5, 1)),
        subject("special (7,1)", special(7, 1)),
        subject("special (11,1)", special(11, 1)),
        subject("special (5,2)", special(5, 2)),
    ];
    for seed in [0u64, 1, 2] {
        subjects.push(subject(
            &format!("generic (5,2) seed {seed}"),
            generic(seed),
        ));
    }
    let build_elapsed = build_start.elapsed();
    let special52 = &subjects[3];
    let generic52 = &subjects[4];
    let psi = psi_findings(&[&special52.k, &generic52.k]);

    let lines = vec![
        timed(1, "strata table golden file", criterion1),
        timed(2, "oracle/criterion agreement, sigma=1", criterion2),
        timed(3, "oracle/criterion agreement, sigma=2", || {
            criterion3(special52, generic52)
        }),
        timed(4, "evenness and divisibility", || criterion4(&subjects)),
        timed(5, "non-split form certification", criterion5),
        timed(6, "Gram shape in the distinguished basis", || {
            criterion6(&subjects)
        }),
        timed(7, "Psi equivariance", || criterion7(&psi)),
        timed(8, "reduction classifier", criterion8),
        timed(9, "cyclotomic bounds", criterion9),
        timed(10, "reflection triviality", criterion10),
        timed(11, "eigenvalue relations", || criterion11(&subjects)),
    ];
    println!("subjects built in {:.2?}", build_elapsed);
    for l in &lines {
        let tag = match l.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        println!(
            "[{tag}] {:>2} {} ({:.2?}): {}",
            l.id, l.title, l.elapsed, l.detail
        );
    }

    for l in &lines {
        match l.id {
            7 | 8 => assert_eq!(
                l.status,
                Status::Fail,
                "criterion {} now passes as written",
                l.id
            ),
            _ => assert_eq!(
                l.status,
                Status::Pass,
                "criterion {} failed: {}",
                l.id,
                l.detail
            ),
        }
    }

    // 7: the computed factor is exact and the literal one is its Frobenius relabelling
    assert!(psi.exact && psi.reparametrized && psi.same_orbits);
    // special a = 0 agrees for all 26; the generic subspace only for xi = 1, -1
    assert_eq!(psi.literal_agreement_count, 26 + 2);

    // 8: everything but the expected m = 9 list holds; that list contains 11, of odd order
    assert_eq!(residue_classes_for_artin(38, 9), [3, 13, 15, 21, 29, 33]);
    assert_eq!(pow_mod(11, 3, 38), 1);
    assert_eq!(residue_classes_for_artin(38, 3), [27, 31]);
    assert_eq!(residue_classes_for_artin(38, 1), [37]);
    assert_eq!(
        classify_reduction(38, 19).outcome,
        ReductionOutcome::Invalid
    );
    let note = residue_partition(38)
        .notes
        .into_iter()
        .find(|n| n.artin == 9)
        .unwrap();
    assert_eq!(note.non_units_in_printed, [19]);
    assert_eq!(note.missing_from_printed, [21]);

    // 3: the pattern of the found subspace is the generic one
    assert_eq!(
        zero_pattern(generic52.k.a()).unwrap(),
        ZeroPattern::generic(2).unwrap()
    );
}

/// Special (5,3) subspace over GF(5^6): index 126.
#[test]
fn special_sigma3_oracle() {
    let r = enumerate_index(&special(5, 3), 1 << 20).unwrap();
    println!("special (5,3) index {}", r.index);
    assert_eq!(r.index, 126);
    assert_eq!(
        nonsymplectic_index(5, 3, &ZeroPattern::all_zero(3).unwrap())
            .unwrap()
            .index,
        126u32.into()
    );
}
