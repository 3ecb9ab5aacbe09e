//! Acceptance suite: one test per acceptance criterion, each printing a
//! single `ACCEPTANCE n: PASS` line (run with `--nocapture` to see them on
//! success; failures always show the line and the offending detail).
//!
//! The shared corpus is one thousand seeded model pairs plus a fixed set of
//! hand-built pairs that pin down every scenario gate, so no criterion can
//! pass vacuously.

use std::process::Command;
use std::time::Instant;

use bweyl_core::{
    ascent_descent, drazin_inverse, elementary_rep, gen_pair, kron, oracle_agreement,
    parse_operator, product_profile, product_report, render_operator, transfer_report,
    BlockModel, ExactMatrix, GaussianRational, Mode, PredictionRule, Scenario, SetDelta,
    SpectralProfile, SymbolicSet, TransferReport, ZeroClass,
};

const DEPTH: u32 = 64;
const CORPUS_SEEDS: u64 = 1000;

fn op(text: &str) -> BlockModel {
    parse_operator(text, DEPTH).unwrap_or_else(|e| panic!("fixture `{text}`: {e}"))
}

/// Hand-built pairs appended to the seeded corpus. Each one pins a scenario
/// gate: nilpotent factors, algebraic factors with and without a pole at
/// zero, quasi-nilpotent and cluster behavior at zero, and plain invertible
/// products.
fn hand_pairs() -> Vec<(BlockModel, BlockModel)> {
    let pairs: [(&str, &str); 13] = [
        ("sum(pole(0, ord=1, rank=inf))", "sum(cluster(3, r=1, q=1/2))"),
        (
            "sum(pole(0, ord=2, rank=inf), pole(2, ord=1, rank=fin))",
            "sum(quasinil(0), pole(1, ord=1, rank=inf))",
        ),
        (
            "sum(pole(0, ord=2, rank=inf), pole(2, ord=1, rank=fin))",
            "sum(quasinil(3), pole(1, ord=1, rank=inf))",
        ),
        (
            "sum(pole(1, ord=1, rank=inf), pole(2, ord=1, rank=fin))",
            "sum(quasinil(0), pole(1, ord=1, rank=inf))",
        ),
        (
            "sum(quasinil(0), pole(1, ord=1, rank=inf))",
            "sum(pole(0, ord=1, rank=inf), pole(3, ord=2, rank=fin))",
        ),
        ("sum(quasinil(0), pole(1, ord=1, rank=inf))", "sum(cluster(2, r=1, q=1/2))"),
        (
            "sum(pole(0, ord=1, rank=inf), quasinil(1))",
            "sum(pole(0, ord=1, rank=inf), cluster(3, r=1, q=1/2))",
        ),
        ("sum(quasinil(1), pole(2, ord=1, rank=inf))", "sum(cluster(3, r=1, q=1/2))"),
        (
            "sum(pole(0, ord=1, rank=inf), pole(1, ord=1, rank=fin))",
            "sum(pole(2, ord=1, rank=inf))",
        ),
        ("sum(cluster(0, r=1, q=1/2))", "sum(pole(1, ord=1, rank=inf), pole(-1, ord=2, rank=fin))"),
        ("sum(cluster(0, r=1, q=1/2))", "sum(pole(0, ord=1, rank=inf), pole(2, ord=1, rank=fin))"),
        ("sum(quasinil(0), pole(2, ord=1, rank=inf))", "sum(quasinil(0), pole(3, ord=1, rank=inf))"),
        ("sum(quasinil(2), pole(1, ord=1, rank=inf))", "sum(pole(1/2, ord=1, rank=inf), quasinil(0))"),
    ];
    pairs.iter().map(|(a, b)| (op(a), op(b))).collect()
}

fn corpus() -> Vec<(BlockModel, BlockModel)> {
    let mut pairs: Vec<(BlockModel, BlockModel)> =
        (0..CORPUS_SEEDS).map(|seed| gen_pair(seed, DEPTH)).collect();
    pairs.extend(hand_pairs());
    pairs
}

fn transfer_both_modes(
    a: &BlockModel,
    b: &BlockModel,
) -> (SpectralProfile, SpectralProfile, TransferReport, TransferReport) {
    let pa = a.profile(DEPTH).unwrap();
    let pb = b.profile(DEPTH).unwrap();
    let tensor = transfer_report(&pa, &pb, Mode::Tensor, DEPTH).unwrap();
    let elem = transfer_report(&pa, &pb, Mode::Elementary, DEPTH).unwrap();
    (pa, pb, tensor, elem)
}

#[test]
fn acceptance_01_two_path_product_equivalence() {
    let start = Instant::now();
    let pairs = corpus();
    let mut checked = 0usize;
    for (i, (a, b)) in pairs.iter().enumerate() {
        for mode in [Mode::Tensor, Mode::Elementary] {
            let report = oracle_agreement(a, b, mode, DEPTH)
                .unwrap_or_else(|e| panic!("pair {i} ({mode:?}): {e}"));
            assert!(
                report.equal,
                "pair {i} ({mode:?}): oracle {} vs calculus {}",
                report.oracle, report.calculus
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(checked >= 2000, "only {checked} comparisons");
    assert!(elapsed.as_secs() < 30, "two-path corpus took {elapsed:?}, budget 30s");
    println!(
        "ACCEPTANCE 1: PASS - {} pairs x 2 modes structurally identical in {:?}",
        pairs.len(),
        elapsed
    );
}

#[test]
fn acceptance_02_zero_class_table_on_hand_pairs() {
    // One pair per tabulated configuration of zero in the factor spectra;
    // the first three must come out poles, the last three iso-non-poles.
    let cases: [(&str, &str, ZeroClass); 6] = [
        (
            "sum(pole(0, ord=1, rank=inf))",
            "sum(pole(1, ord=1, rank=inf))",
            ZeroClass::Pole,
        ),
        (
            "sum(pole(0, ord=2, rank=inf), pole(1, ord=1, rank=fin))",
            "sum(pole(2, ord=1, rank=inf))",
            ZeroClass::Pole,
        ),
        (
            "sum(pole(0, ord=1, rank=inf), pole(1, ord=1, rank=fin))",
            "sum(pole(0, ord=1, rank=inf), pole(2, ord=1, rank=fin))",
            ZeroClass::Pole,
        ),
        (
            "sum(quasinil(0))",
            "sum(pole(1, ord=1, rank=inf), pole(2, ord=1, rank=fin))",
            ZeroClass::IsoNonPole,
        ),
        (
            "sum(quasinil(0), pole(1, ord=1, rank=inf))",
            "sum(pole(2, ord=1, rank=inf))",
            ZeroClass::IsoNonPole,
        ),
        (
            "sum(quasinil(0), pole(1, ord=1, rank=inf))",
            "sum(pole(0, ord=1, rank=inf), pole(2, ord=1, rank=fin))",
            ZeroClass::IsoNonPole,
        ),
    ];
    for (i, (a, b, expected)) in cases.iter().enumerate() {
        let pa = op(a).profile(DEPTH).unwrap();
        let pb = op(b).profile(DEPTH).unwrap();
        for mode in [Mode::Tensor, Mode::Elementary] {
            let report = product_report(&pa, &pb, mode, DEPTH).unwrap();
            assert_eq!(
                report.zero_class, *expected,
                "case {} ({mode:?}): got {:?}",
                i + 1,
                report.zero_class
            );
        }
    }
    println!("ACCEPTANCE 2: PASS - 6 hand pairs match the zero-class table in both modes");
}

#[test]
fn acceptance_03_reverse_inclusion_corpus_wide() {
    let pairs = corpus();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let (_, _, tensor, elem) = transfer_both_modes(a, b);
        assert!(tensor.reverse_inclusion_holds, "pair {i} tensor");
        assert!(elem.reverse_inclusion_holds, "pair {i} elementary");
    }
    println!(
        "ACCEPTANCE 3: PASS - product B-Weyl spectrum inside the combined set on {} pairs, both modes",
        pairs.len()
    );
}

#[test]
fn acceptance_04_inclusion_failures_differ_exactly_by_zero() {
    let pairs = corpus();
    let zero_set = SymbolicSet::new([GaussianRational::zero()], []);
    let mut failures = 0usize;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let (_, _, tensor, _) = transfer_both_modes(a, b);
        if tensor.inclusion_holds {
            continue;
        }
        failures += 1;
        assert_eq!(tensor.delta, SetDelta::EqualPlusZero, "pair {i}");
        // Recompute the claim from raw sets rather than trusting the field.
        let rebuilt = tensor.sigma_bw_product.union(&zero_set);
        assert!(
            tensor.s_set.set_eq(&rebuilt, DEPTH).unwrap(),
            "pair {i}: combined set {} vs bweyl-plus-zero {}",
            tensor.s_set,
            rebuilt
        );
        assert_eq!(tensor.witnesses, vec![GaussianRational::zero()], "pair {i}");
    }
    assert!(failures > 0, "corpus never exercises an inclusion failure");
    println!(
        "ACCEPTANCE 4: PASS - {failures} inclusion failures, every one off by exactly {{0}}"
    );
}

#[test]
fn acceptance_05_non_algebraic_pairs_three_way_equivalence() {
    let pairs = corpus();
    let mut checked = 0usize;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let pa = a.profile(DEPTH).unwrap();
        let pb = b.profile(DEPTH).unwrap();
        let tensor = transfer_report(&pa, &pb, Mode::Tensor, DEPTH).unwrap();
        if tensor.scenario != Scenario::BothNonAlgebraic {
            continue;
        }
        checked += 1;
        let product = product_profile(&pa, &pb, Mode::Tensor, DEPTH).unwrap();
        let derived = product.derived_sets(DEPTH);
        let zero = GaussianRational::zero();

        let inclusion = tensor.inclusion_holds;
        let zero_not_a_pole = !derived.poles.contains(&zero);
        let invertible_or_not_drazin =
            !derived.sigma.contains(&zero) || !product.flags().drazin_invertible;

        assert_eq!(inclusion, zero_not_a_pole, "pair {i}: inclusion vs pole test");
        assert_eq!(
            zero_not_a_pole, invertible_or_not_drazin,
            "pair {i}: pole test vs Drazin test"
        );
    }
    assert!(checked > 0, "corpus has no both-non-algebraic pairs");
    println!(
        "ACCEPTANCE 5: PASS - three-way equivalence on {checked} both-non-algebraic pairs"
    );
}

#[test]
fn acceptance_06_gated_algebraic_equivalence() {
    let pairs = corpus();
    let mut gated = 0usize;
    let mut complementary = 0usize;
    let mut complementary_agreeing = 0usize;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let (pa, pb, tensor, _) = transfer_both_modes(a, b);
        let algebraic_side_zero_pole = match tensor.scenario {
            Scenario::AAlgebraicNotNilpotent => {
                pa.derived_sets(DEPTH).poles.contains(&GaussianRational::zero())
            }
            Scenario::BAlgebraicNotNilpotent => {
                pb.derived_sets(DEPTH).poles.contains(&GaussianRational::zero())
            }
            _ => continue,
        };
        let prediction = tensor.prediction.expect("one-sided algebraic scenarios carry a rule");
        assert_eq!(prediction.rule, PredictionRule::PartnerNotDrazinInvertible, "pair {i}");
        assert_eq!(prediction.hypotheses_met, algebraic_side_zero_pole, "pair {i}");
        if prediction.hypotheses_met {
            gated += 1;
            assert!(
                prediction.agrees,
                "pair {i}: inclusion {} but partner-not-Drazin predicted {}",
                tensor.inclusion_holds, prediction.predicted_inclusion
            );
        } else {
            // Outside the gate the rule is reported, never asserted.
            complementary += 1;
            if prediction.agrees {
                complementary_agreeing += 1;
            }
        }
    }
    assert!(gated > 0, "corpus has no gated one-sided algebraic pairs");
    assert!(complementary > 0, "corpus has no complementary one-sided algebraic pairs");
    println!(
        "ACCEPTANCE 6: PASS - equivalence on {gated} gated pairs; {complementary} complementary pairs logged ({complementary_agreeing} agree anyway)"
    );
}

#[test]
fn acceptance_07_equality_and_weyl_identity_under_hypotheses() {
    let pairs = corpus();
    let mut checked = 0usize;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let (_, _, tensor, elem) = transfer_both_modes(a, b);
        for (label, report) in [("tensor", &tensor), ("elementary", &elem)] {
            if !report.equality_hypotheses_met {
                continue;
            }
            checked += 1;
            assert!(report.s_equals_bweyl_product, "pair {i} {label}: set equality");
            assert!(report.inclusion_holds, "pair {i} {label}: inclusion");
            assert_eq!(report.delta, SetDelta::Equal, "pair {i} {label}");
            assert!(report.weyl_identity_holds, "pair {i} {label}: Weyl identity");
        }
    }
    assert!(checked > 0, "corpus never meets the equality hypotheses");
    println!(
        "ACCEPTANCE 7: PASS - set equality and the Weyl identity on {checked} hypothesis-meeting reports"
    );
}

/// Deterministic matrix corpus for the matrix-lab criterion: a xorshift
/// stream drives entry and shape choices, so runs are reproducible without
/// pulling a random-number dependency into the test.
struct MiniRng(u64);

impl MiniRng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[(self.next() % items.len() as u64) as usize]
    }
}

fn entry_pool() -> Vec<GaussianRational> {
    vec![
        GaussianRational::from_int(0),
        GaussianRational::from_int(1),
        GaussianRational::from_int(-1),
        GaussianRational::from_int(2),
        GaussianRational::from_parts(1, 2, 0, 1),
        GaussianRational::from_parts(0, 1, 1, 1),
    ]
}

fn random_triangular(rng: &mut MiniRng, dim: usize, upper: bool) -> ExactMatrix {
    let pool = entry_pool();
    let mut m = ExactMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if (upper && j >= i) || (!upper && j <= i) {
                m.set(i, j, rng.pick(&pool).clone());
            }
        }
    }
    m
}

/// Unit lower-triangular, hence exactly invertible.
fn random_unit_lower(rng: &mut MiniRng, dim: usize) -> ExactMatrix {
    let pool = entry_pool();
    let mut m = ExactMatrix::identity(dim);
    for i in 1..dim {
        for j in 0..i {
            m.set(i, j, rng.pick(&pool).clone());
        }
    }
    m
}

#[test]
fn acceptance_08_matrix_lab_corpus() {
    let start = Instant::now();
    let mut rng = MiniRng(0x3243f6a8885a308d);
    let dims = [2usize, 2, 2, 3, 3, 4];

    // Triangular pairs through the full validation: pairwise spectrum with
    // completeness, pole orders, ascent = descent, Drazin identities, and
    // cross-mode agreement.
    let mut validated = 0usize;
    for k in 0..200 {
        let da = *rng.pick(&dims);
        let db = if k % 25 == 0 { *rng.pick(&[5usize, 6]) } else { *rng.pick(&dims) };
        let a = random_triangular(&mut rng, da, k % 2 == 0);
        let b = random_triangular(&mut rng, db, k % 3 != 0);
        let mode = if k % 2 == 0 { Mode::Tensor } else { Mode::Elementary };
        let report = bweyl_core::validate_matrix_pair(&a, &b, mode)
            .unwrap_or_else(|e| panic!("pair {k}: {e}"));
        assert!(
            report.all_passed,
            "pair {k} ({}x{}, {mode:?}): {:?}",
            da, db, report.checks.iter().find(|c| !c.passed)
        );
        validated += 1;
    }

    // Conjugated pairs: the spectrum is known from the triangular seed, the
    // representations must reproduce it exactly through rank chains, and the
    // Drazin construction must verify its identities on the conjugated
    // product representations.
    let mut conjugated = 0usize;
    for k in 0..30 {
        let da = *rng.pick(&[2usize, 3]);
        let db = *rng.pick(&[2usize, 3]);
        let ta = random_triangular(&mut rng, da, true);
        let tb = random_triangular(&mut rng, db, true);
        let pa = random_unit_lower(&mut rng, da);
        let pb = random_unit_lower(&mut rng, db);
        let (ma, sa) = bweyl_core::conjugated_spectrum(&pa, &ta).unwrap();
        let (mb, sb) = bweyl_core::conjugated_spectrum(&pb, &tb).unwrap();
        let mut expected: Vec<GaussianRational> = Vec::new();
        for x in &sa {
            for y in &sb {
                let p = x * y;
                if !expected.contains(&p) {
                    expected.push(p);
                }
            }
        }
        for rep in [kron(&ma, &mb).unwrap(), elementary_rep(&ma, &mb).unwrap()] {
            let dim = rep.rows();
            let mut total = 0usize;
            for lambda in &expected {
                let ad = ascent_descent(&rep, lambda).unwrap();
                assert!(ad.pole_order >= 1, "pair {k}: {lambda} missing from spectrum");
                assert_eq!(ad.ascent, ad.descent, "pair {k} at {lambda}");
                let shifted = rep.shift(lambda).unwrap().pow(dim as u32).unwrap();
                total += dim - shifted.rank();
            }
            assert_eq!(total, dim, "pair {k}: unexpected extra spectrum");
            drazin_inverse(&rep).unwrap_or_else(|e| panic!("pair {k}: {e}"));
        }
        conjugated += 1;
    }

    // The classic order jump: a Jordan block squared in the tensor square.
    let j2 = ExactMatrix::jordan_block(&GaussianRational::from_int(1), 2);
    let jj = kron(&j2, &j2).unwrap();
    let ad = ascent_descent(&jj, &GaussianRational::from_int(1)).unwrap();
    assert_eq!(ad.pole_order, 3, "rank-one perturbation structure of the tensor square");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "matrix corpus took {elapsed:?}, budget 60s");
    println!(
        "ACCEPTANCE 8: PASS - {validated} triangular pairs validated, {conjugated} conjugated pairs cross-checked, order-3 pole confirmed, in {elapsed:?}"
    );
}

#[test]
fn acceptance_09_mode_coincidence_structural() {
    let pairs = corpus();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let pa = a.profile(DEPTH).unwrap();
        let pb = b.profile(DEPTH).unwrap();
        let rt = product_report(&pa, &pb, Mode::Tensor, DEPTH).unwrap();
        let re = product_report(&pa, &pb, Mode::Elementary, DEPTH).unwrap();
        assert_eq!(rt.profile, re.profile, "pair {i}: product profiles");
        assert_eq!(rt.zero_class, re.zero_class, "pair {i}: zero classes");
        assert_eq!(rt.zero_case, re.zero_case, "pair {i}: zero provenance");
        assert_eq!(rt.nonzero, re.nonzero, "pair {i}: nonzero provenance");

        let tt = transfer_report(&pa, &pb, Mode::Tensor, DEPTH).unwrap();
        let te = transfer_report(&pa, &pb, Mode::Elementary, DEPTH).unwrap();
        assert!(tt.same_findings(&te), "pair {i}: transfer reports diverge");
    }
    println!(
        "ACCEPTANCE 9: PASS - tensor and elementary reports structurally identical on {} pairs",
        pairs.len()
    );
}

#[test]
fn acceptance_10_dsl_round_trip_and_cli_determinism() {
    let pairs = corpus();
    for (i, (a, b)) in pairs.iter().enumerate() {
        for model in [a, b] {
            let text = render_operator(model);
            let reparsed = parse_operator(&text, DEPTH)
                .unwrap_or_else(|e| panic!("pair {i}: `{text}`: {e}"));
            assert_eq!(&reparsed, model, "pair {i}: `{text}`");
        }
    }

    let dir = tempfile::TempDir::new().unwrap();
    let a_path = dir.path().join("a.op");
    let b_path = dir.path().join("b.op");
    std::fs::write(&a_path, "sum(pole(0, ord=2, rank=inf), quasinil(1))").unwrap();
    std::fs::write(&b_path, "sum(cluster(2, r=1, q=1/2), pole(3, ord=1, rank=inf))").unwrap();

    let golden: [(&[&str], &str); 2] = [
        (
            &["classify"],
            "profile: {pole(0, ord=2, rank=inf), iso_nonpole(1)}\n\
             zero_class: pole\n\
             nilpotent: false\n\
             quasinilpotent: false\n\
             algebraic: false\n\
             drazin_invertible: true\n\
             sigma: {0, 1}\n\
             isolated: {0, 1}\n\
             acc: {}\n\
             poles: {0}\n\
             finite_rank_poles: {}\n\
             iso_non_poles: {1}\n\
             drazin_spectrum: {1}\n\
             bweyl_spectrum: {1}\n\
             weyl_spectrum: {0, 1}\n",
        ),
        (
            &["oracle"],
            "AGREE\n",
        ),
    ];
    for (args, expected) in golden {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_bweyl"));
        cmd.args(args).arg(&a_path);
        if args[0] == "oracle" {
            cmd.arg(&b_path);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "{args:?}");
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{args:?}");
    }

    // Byte-for-byte determinism of a JSON report across repeated runs.
    let run_transfer = || {
        Command::new(env!("CARGO_BIN_EXE_bweyl"))
            .args(["transfer", "--json"])
            .arg(&a_path)
            .arg(&b_path)
            .output()
            .unwrap()
    };
    let first = run_transfer();
    let second = run_transfer();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    println!(
        "ACCEPTANCE 10: PASS - {} corpus models round-trip; CLI goldens byte-exact",
        2 * pairs.len()
    );
}
