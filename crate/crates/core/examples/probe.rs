// Scratch probe for acceptance-criteria magnitudes; not part of the test
// suite.
use hermconv_core::experiments::{run, ExperimentConfig};
use hermconv_core::gridfn::{DomainKind, GridFunction};
use hermconv_core::hermite::TruncationSchedule;
use hermconv_core::sansone::{lower_bound_ratio, normalized_residual, omega, MRange};

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "remainder" => remainder(),
        "trunc" => trunc(),
        "lower" => lower(),
        "fnconv" => fnconv(),
        _ => eprintln!("usage: probe remainder|trunc|lower|fnconv"),
    }
}

fn remainder() {
    for n in [64usize, 256, 1024, 4096] {
        let mut worst = 0.0f64;
        let mut at = 0.0;
        for i in 0..=512 {
            let x = 0.05 + (2.0 - 0.05) * i as f64 / 512.0;
            let r = normalized_residual(n, x).unwrap().abs();
            let w = omega(n, x);
            if r / w > worst {
                worst = r / w;
                at = x;
            }
        }
        println!("n={n:5}  max |R|/omega = {worst:.6} at x={at:.4}");
    }
}

fn trunc() {
    let mut cfg = ExperimentConfig::default();
    cfg.corpus = vec!["smooth_bump".to_string(), "step".to_string()];
    cfg.n_list = vec![64, 256, 1024, 4096];
    cfg.p_list = vec![1.2, 2.0, 6.0];
    let t0 = std::time::Instant::now();
    let out = run(&cfg).unwrap();
    println!("elapsed: {:.1} s", t0.elapsed().as_secs_f64());
    for curve in &out.report.curves {
        println!("== {}", curve.function);
        for row in &curve.rows {
            print!("  n={:5} T={:.4}", row.n, row.t_n);
            for (label, e) in &row.errors {
                print!("  {label}={e:.6e}");
            }
            println!();
        }
    }
    for check in &out.report.checks {
        println!("{}: {:?} {}", check.name, check.report.verdict, check.report.notes);
    }
}

fn lower() {
    let g = GridFunction::indicator(DomainKind::HalfLine, 0.0, 1.0).unwrap();
    let sched = TruncationSchedule::default();
    let x_grid: Vec<f64> = (0..12)
        .map(|i| 0.04 * (1.1f64 / 0.04).powf(i as f64 / 11.0))
        .collect();
    for n in [256usize, 1024, 4096] {
        let t0 = std::time::Instant::now();
        let r = lower_bound_ratio(&g, n, &sched, &x_grid, MRange::Lemma).unwrap();
        println!(
            "n={n:5}  min ratio = {:?}  ({}s)",
            r.min_ratio,
            t0.elapsed().as_secs_f64()
        );
        for row in &r.rows {
            println!(
                "   x={:.4}  Sg={:.4}  comb={:.4}  ratio={:?}",
                row.x, row.stieltjes, row.comb_sum, row.ratio
            );
        }
    }
}

fn fnconv() {
    let mut cfg = ExperimentConfig::default();
    cfg.experiment = "fn_convergence".to_string();
    cfg.corpus = vec!["smooth_bump".to_string()];
    cfg.big_n_list = vec![10.0, 20.0, 40.0, 80.0, 160.0, 320.0];
    let t0 = std::time::Instant::now();
    let out = run(&cfg).unwrap();
    println!("elapsed: {:.1} s", t0.elapsed().as_secs_f64());
    for curve in &out.report.curves {
        for row in &curve.rows {
            print!("  N={:4}", row.n);
            for (label, e) in &row.errors {
                print!("  {label}={e:.6e}");
            }
            println!();
        }
    }
    for check in &out.report.checks {
        println!("{}: {:?} {}", check.name, check.report.verdict, check.report.notes);
    }
}
