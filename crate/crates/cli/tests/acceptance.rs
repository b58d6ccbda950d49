//! Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path as FsPath;
use std::process::Command as Proc;
use std::time::{Duration, Instant};

use clap::Parser;
use sforge::algebra::check_symmetric;
use sforge::endo::{endo_algebra, present};
use sforge::equivalence::{
    iso_search, verify_socle_certificate, EquivalenceVerdict, IsoBudget, SocleCertificate,
};
use sforge::examples::{symmetric_nakayama, weighted_surface_example, WsaParams};
use sforge::mutation::{
    build_addq_resolution, closures_agree, from_projective_resolution, iterate, periodic_extension,
    resolution_isomorphism, resolutions_equivalent, AddQResolution, MutationState,
};
use sforge::proj::ProjMap;
use sforge::representations::{hom_space, period_of_simple, projective};
use sforge::verify::{verify, VerifyOptions};
use sforge::{Algebra, AlgebraPresentation, Field, Fp};
use sforge_cli::{run, Cli};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f5() -> Fp {
    Fp::new(5).unwrap()
}

fn wsa_pres(b: u64) -> AlgebraPresentation<Fp> {
    let f = f5();
    let mut params = WsaParams::new(&f, 1, 2, 3);
    params.b = b;
    weighted_surface_example(&f, &params).unwrap()
}

fn wsa(b: u64) -> Algebra<Fp> {
    Algebra::build(&wsa_pres(b), 20).unwrap()
}

fn nakayama(n: usize, ell: usize) -> Algebra<Fp> {
    Algebra::build(&symmetric_nakayama(&f5(), n, ell).unwrap(), 20).unwrap()
}

/// Element of `e_t Λ e_s` given by a word of arrow ids starting at `t`.
fn elem(alg: &Algebra<Fp>, t: usize, word: &str) -> Vec<u64> {
    let ids: Vec<String> = word.split_whitespace().map(String::from).collect();
    let p = alg.quiver().path_from_ids(&ids).unwrap();
    assert_eq!(p.source, t, "{word} does not start at vertex {}", t + 1);
    alg.path_coords(&p)
}

/// The resolution at vertex 5 written down by hand: `f¹ = ε`, `f² = εη`, `d₊ = η`.
fn hand_resolution_5(alg: &Algebra<Fp>) -> (MutationState<u64>, ProjMap<u64>) {
    let f1 = ProjMap::single(4, 1, elem(alg, 1, "epsilon"));
    let f2 = ProjMap::single(1, 1, elem(alg, 1, "epsilon eta"));
    let dp = ProjMap::single(1, 4, elem(alg, 4, "eta"));
    (MutationState::from_maps(alg, 4, vec![f1, f2]).unwrap(), dp)
}

/// The resolution at vertex 1: `f¹ = (δ, δρ)ᵀ`, `f² = [[ξ, −aA], [0, ξ]]` with
/// `A = βεην`, and the closing row `(ρα, α)`.
fn hand_resolution_1(alg: &Algebra<Fp>) -> (MutationState<u64>, ProjMap<u64>) {
    let f = alg.field();
    let b = alg.blocks();
    let mut f1 = ProjMap::zero(b, &[0], &[3, 3]);
    f1.entries[0][0] = elem(alg, 3, "delta");
    f1.entries[1][0] = elem(alg, 3, "delta rho");
    let mut f2 = ProjMap::zero(b, &[3, 3], &[2, 2]);
    let xi = elem(alg, 2, "xi");
    f2.entries[0][0] = xi.clone();
    f2.entries[0][1] = elem(alg, 2, "beta epsilon eta nu")
        .iter()
        .map(|c| f.neg(c))
        .collect();
    f2.entries[1][1] = xi;
    let mut dp = ProjMap::zero(b, &[2, 2], &[0]);
    dp.entries[0][0] = elem(alg, 0, "rho alpha");
    dp.entries[0][1] = elem(alg, 0, "alpha");
    (MutationState::from_maps(alg, 0, vec![f1, f2]).unwrap(), dp)
}

/// Engine resolution agrees with the hand-written one: complexes isomorphic
/// fixing `P_i`, closures equal up to a unit.
fn matches_hand(
    alg: &Algebra<Fp>,
    res: &AddQResolution<u64>,
    hand: &(MutationState<u64>, ProjMap<u64>),
) -> Result<(), String> {
    let phis = resolution_isomorphism(alg, &res.state, &hand.0)
        .ok_or("resolution differs from the displayed maps")?;
    let d = res
        .d_plus
        .as_ref()
        .ok_or("engine resolution has no closure")?;
    ensure(
        closures_agree(alg, d, &hand.1, phis.last().unwrap()),
        || "d₊ differs from the displayed map".into(),
    )
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let alg = wsa(0);
    let periods: Vec<Option<usize>> = (0..5)
        .map(|i| period_of_simple(&alg, i, 12).unwrap())
        .collect();
    ensure(periods.iter().all(|p| *p == Some(4)), || {
        format!("periods {periods:?}")
    })?;
    let res = build_addq_resolution(&alg, 4, 6).map_err(|e| e.to_string())?;
    ensure(res.len() == 2 && res.is_periodic(), || {
        "no periodic resolution of length 2".into()
    })?;
    matches_hand(&alg, &res, &hand_resolution_5(&alg))?;
    let v = verify(&alg, 4, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    ensure(v.verdict.is_isomorphic(), || {
        format!("verdict {}", v.report.verdict_kind)
    })?;
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "periods 4 at all 5 vertices; f¹ ≅ ε, d₊ ≅ η; verdict Isomorphic ({:.1} s)",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Check {
    let t = Instant::now();
    let alg = wsa(0);
    let res = build_addq_resolution(&alg, 0, 6).map_err(|e| e.to_string())?;
    ensure(res.len() == 2 && res.is_periodic(), || {
        "no periodic resolution of length 2".into()
    })?;
    let hand = hand_resolution_1(&alg);
    ensure(
        resolution_isomorphism(&alg, &res.state, &hand.0).is_some(),
        || "f¹, f² differ from the displayed maps".into(),
    )?;
    let v = verify(&alg, 0, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    let mu = v.mutated.as_ref().ok_or("no mutated algebra")?;
    ensure(mu.algebra.quiver() == alg.quiver(), || {
        "quiver of μ₁²(Λ) differs from Q_Λ".into()
    })?;
    let socle =
        serde_json::from_value::<serde_json::Value>(v.report.socle_quotients.clone()).unwrap();
    ensure(
        socle["verdict"] == "SocleEquivalentAt" && socle["vertex"] == 1,
        || format!("socle comparison: {}", socle["verdict"]),
    )?;
    let quotient_cert = match sforge::equivalence::socle_equivalence_by_search(
        &mu.algebra,
        &alg,
        0,
        &IsoBudget::default(),
    ) {
        Ok(EquivalenceVerdict::SocleEquivalentAt { certificate, .. }) => certificate,
        _ => return Err("socle-quotient certificate not reproducible".into()),
    };
    ensure(
        verify_socle_certificate(&mu.algebra, &alg, 0, &quotient_cert),
        || "socle certificate does not re-verify".into(),
    )?;
    ensure(
        matches!(quotient_cert, SocleCertificate::Quotients(_)),
        || "unexpected certificate kind".into(),
    )?;
    let same_shape: Vec<u64> = (0..5)
        .filter(|&b| iso_search(&mu.algebra, &wsa(b), &IsoBudget::default()).is_isomorphic())
        .collect();
    ensure(!same_shape.is_empty(), || {
        "μ₁²(Λ) is not recognized as a WSA for any b ∈ F₅".into()
    })?;
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "f¹ ≅ (δ, δρ), f² ≅ [[ξ, −aA], [0, ξ]]; SocleEquivalentAt(1) certified on the quotients; Q equal, ≅ WSA with b ∈ {same_shape:?}; final verdict {} ({:.1} s)",
        v.report.verdict_kind,
        elapsed.as_secs_f64()
    ))
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let alg = nakayama(2, 3);
    ensure((0..2).all(|v| !alg.quiver().has_loop_at(v)), || {
        "quiver has a loop".into()
    })?;
    for i in 0..2 {
        let oracle = common::nakayama_simple_period(2, 3, i);
        let engine = period_of_simple(&alg, i, 12).map_err(|e| e.to_string())?;
        ensure(oracle == 4 && engine == Some(oracle), || {
            format!("S_{}: oracle {oracle}, engine {engine:?}", i + 1)
        })?;
        let v = verify(&alg, i, &VerifyOptions::default()).map_err(|e| e.to_string())?;
        ensure(v.report.phi.certified, || {
            format!("Φ at vertex {}: {:?}", i + 1, v.report.phi.detail)
        })?;
        let quotients = &v.report.socle_quotients["verdict"];
        ensure(quotients == "SocleEquivalentAt", || {
            format!("quotient search at vertex {}: {quotients}", i + 1)
        })?;
        ensure(v.report.exit_code() == 0, || {
            format!("verdict {}", v.report.verdict_kind)
        })?;
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("loop-free, periods 4 (uniserial oracle); Φ and quotient search both certify at vertices 1, 2 ({:.2} s)", elapsed.as_secs_f64()))
}

fn criterion_4() -> Check {
    let alg = nakayama(2, 3);
    for i in 0..2 {
        let a = from_projective_resolution(&alg, i)
            .map_err(|e| e.to_string())?
            .ok_or("hypothesis route unavailable")?;
        let b = build_addq_resolution(&alg, i, 6).map_err(|e| e.to_string())?;
        ensure(a.state.terms() == b.state.terms(), || {
            format!("terms differ at vertex {}", i + 1)
        })?;
        ensure(resolutions_equivalent(&alg, &a, &b), || {
            format!("resolutions differ at vertex {}", i + 1)
        })?;
    }
    Ok("projective-resolution and approximation routes agree at both vertices".into())
}

fn bundled() -> Vec<(&'static str, Algebra<Fp>)> {
    vec![
        ("N(2,3)", nakayama(2, 3)),
        ("N(3,4)", nakayama(3, 4)),
        ("N(2,5)", nakayama(2, 5)),
        ("WSA b=0", wsa(0)),
        ("WSA b=1", wsa(1)),
    ]
}

fn criterion_5() -> Check {
    let mut complexes = 0;
    for (name, alg) in bundled() {
        for v in 0..alg.vertex_count() {
            let mut state = MutationState::initial(&alg, v).unwrap();
            for k in 1..=4 {
                state = sforge::mutation::mutate_step(&alg, &state)
                    .map_err(|e| format!("{name} μ_{}^{k}: {e}", v + 1))?;
                let check = state.tilting_check(&alg).map_err(|e| e.to_string())?;
                ensure(check.holds, || {
                    format!("{name} μ_{}^{k}: not tilting {:?}", v + 1, check.failures)
                })?;
                let endo = endo_algebra(alg.blocks(), state.summands(&alg).unwrap())
                    .map_err(|e| e.to_string())?;
                let p = present(endo.blocks(), Some(alg.quiver()))
                    .map_err(|e| format!("{name} μ_{}^{k}: {e}", v + 1))?;
                let symmetric = check_symmetric(&p.algebra).map_err(|e| e.to_string())?;
                ensure(symmetric.is_some(), || {
                    format!("{name} μ_{}^{k}: presented algebra not symmetric", v + 1)
                })?;
                complexes += 1;
            }
        }
    }
    Ok(format!(
        "{complexes} complexes tilting, all presented mutations symmetric"
    ))
}

fn criterion_6() -> Check {
    let f = f5();
    let mut hom_checks = 0;
    for (name, alg) in bundled() {
        for v in 0..alg.vertex_count() {
            for k in 1..=4 {
                let state = iterate(&alg, v, k).map_err(|e| e.to_string())?;
                let kb = state.stalk_hom_dims(&alg).map_err(|e| e.to_string())?;
                let (cok, _) = state.cokernel(&alg);
                for (j, &d) in kb.iter().enumerate() {
                    let module = hom_space(&alg, &cok, &projective(&alg, j)).len();
                    ensure(module == d, || {
                        format!(
                            "{name} i={} k={k} j={}: K^b {d}, module {module}",
                            v + 1,
                            j + 1
                        )
                    })?;
                    hom_checks += 1;
                }
            }
        }
    }
    let mut presentations: Vec<(String, AlgebraPresentation<Fp>)> = vec![
        ("WSA b=0".into(), wsa_pres(0)),
        ("WSA b=1".into(), wsa_pres(1)),
        ("N(1,2)".into(), symmetric_nakayama(&f, 1, 2).unwrap()),
    ];
    for (n, l) in [(2, 3), (3, 4), (2, 5), (3, 7)] {
        presentations.push((format!("N({n},{l})"), symmetric_nakayama(&f, n, l).unwrap()));
    }
    let base = wsa(0);
    for (v, k) in [(0, 1), (0, 2), (4, 1), (4, 2)] {
        let p = sforge::explore::mutate(&base, v, k).map_err(|e| e.to_string())?;
        presentations.push((
            format!("μ_{}^{k}(WSA)", v + 1),
            p.algebra.presentation().clone(),
        ));
    }
    for (name, pres) in &presentations {
        let engine = Algebra::build(pres, 20)
            .map_err(|e| format!("{name}: {e}"))?
            .dim();
        let oracle =
            common::naive_dim(pres, 16).ok_or(format!("{name}: oracle did not stabilize"))?;
        ensure(engine == oracle, || {
            format!("{name}: engine {engine}, oracle {oracle}")
        })?;
    }
    let mut segments = 0;
    for (name, alg) in bundled() {
        for v in 0..alg.vertex_count() {
            let res = build_addq_resolution(&alg, v, 6).map_err(|e| e.to_string())?;
            let m = res.len();
            for k in 1..=m + 2 {
                let ext = periodic_extension(&alg, &res, k).map_err(|e| format!("{name}: {e}"))?;
                let direct = iterate(&alg, v, k).map_err(|e| e.to_string())?;
                ensure(
                    resolution_isomorphism(&alg, &ext, &direct).is_some(),
                    || format!("{name} i={} k={k}", v + 1),
                )?;
                segments += 1;
            }
        }
    }
    Ok(format!(
        "(a) {hom_checks} hom dimensions agree; (b) {} presentations match the path-reduction oracle; (c) {segments} periodic segments match iteration",
        presentations.len()
    ))
}

fn criterion_7() -> Check {
    let alg = wsa(0);
    for (v, hand) in [(4, hand_resolution_5(&alg)), (0, hand_resolution_1(&alg))] {
        let res = build_addq_resolution(&alg, v, 6).map_err(|e| e.to_string())?;
        ensure(res.len() == 2 && res.is_periodic(), || {
            format!("vertex {}: no periodic resolution of length 2", v + 1)
        })?;
        matches_hand(&alg, &res, &hand).map_err(|e| format!("vertex {}: {e}", v + 1))?;
    }
    Ok("vertex 5 (self-folded loop) and vertex 1 (border loop): periodic add-Q-resolutions of length 2, d₊ ≅ η and (ρα, α)".into())
}

fn cli_out(args: &[&str]) -> (String, i32) {
    let mut argv = vec!["sforge"];
    argv.extend(args);
    let out = run(&Cli::parse_from(argv), None).unwrap();
    (out.stdout, out.code)
}

fn report_commands(dir: &FsPath) -> Vec<Vec<String>> {
    let w = dir.join("wsa.json").display().to_string();
    let n = dir.join("n23.json").display().to_string();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        s(&["verify", &w, "--vertex", "5"]),
        s(&["verify", &w, "--vertex", "1"]),
        s(&["verify", &n, "--vertex", "1"]),
        s(&["verify", &n, "--vertex", "2"]),
        s(&["mutate", &w, "--vertex", "1", "--steps", "2"]),
        s(&["explore", &n, "--depth", "2"]),
        s(&["explore", &w, "--depth", "1", "--vertices", "1,5"]),
    ]
}

fn criterion_8() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (wsa_text, _) = cli_out(&["gen-wsa"]);
    let (n23_text, _) = cli_out(&["gen-nakayama", "--n", "2", "--l", "3"]);
    std::fs::write(dir.path().join("wsa.json"), wsa_text).unwrap();
    std::fs::write(dir.path().join("n23.json"), n23_text).unwrap();
    let commands = report_commands(dir.path());
    let in_process = |threads: usize| -> Vec<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            commands
                .iter()
                .map(|c| cli_out(&c.iter().map(String::as_str).collect::<Vec<_>>()).0)
                .collect()
        })
    };
    let first = in_process(4);
    ensure(first == in_process(4), || {
        "two in-process runs differ".into()
    })?;
    ensure(first == in_process(1), || {
        "in-process runs differ between 1 and 4 threads".into()
    })?;
    let bin = env!("CARGO_BIN_EXE_sforge");
    let cache_dir = dir.path().join("cache");
    for threads in ["1", "4"] {
        for (k, c) in commands.iter().enumerate() {
            for cached in [false, true, true] {
                let mut cmd = Proc::new(bin);
                cmd.args(c).env("SFORGE_THREADS", threads);
                if cached {
                    cmd.env("SFORGE_CACHE_DIR", &cache_dir);
                } else {
                    cmd.env_remove("SFORGE_CACHE_DIR");
                }
                let out = cmd.output().map_err(|e| e.to_string())?;
                ensure(out.stdout == first[k].as_bytes(), || {
                    format!(
                        "`{}` differs (threads {threads}, cache {cached})",
                        c[..2].join(" ")
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "{} reports byte-identical across repeats, SFORGE_THREADS 1/4, and cache hits",
        commands.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("WSA vertex 5 reproduction", criterion_1),
        ("WSA vertex 1 reproduction", criterion_2),
        ("symmetric Nakayama N(2,3) instance", criterion_3),
        (
            "hypothesis path: projective resolution = approximation resolution",
            criterion_4,
        ),
        ("tilting and symmetry of mutations (k ≤ 4)", criterion_5),
        ("oracle equivalences", criterion_6),
        (
            "loop vertices: periodic add-Q-resolutions of length 2",
            criterion_7,
        ),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
