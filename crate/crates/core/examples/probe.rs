use roundoff_core::abstraction::run_incremental;
use roundoff_core::analysis::AnalysisConfig;
use roundoff_core::benchgen::*;
use roundoff_core::parse::parse_program;
use roundoff_core::shadow::sample_max_error;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");
    let cfg = AnalysisConfig::default();

    let run = |name: &str, src: &str, cfg: &AnalysisConfig, n: u64| {
        let t0 = Instant::now();
        let dag = parse_program(src).unwrap();
        let r = run_incremental(&dag, cfg).unwrap();
        let ta = t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let s = sample_max_error(&dag, n, 12345);
        let ts = t1.elapsed().as_secs_f64();
        for b in &r.bounds {
            println!(
                "{name}: out={} bound={:.3e} conv={} range=[{:.3e},{:.3e}] ops={} rounds={} analysis={ta:.2}s",
                b.name, b.abs_error_bound, b.converged, b.range_lo, b.range_hi, b.op_count, r.rounds.len()
            );
        }
        let sound = r.bounds.iter().all(|b| {
            b.abs_error_bound
                >= s.per_output
                    .iter()
                    .find(|o| o.name == b.name)
                    .map(|o| o.max_abs_error)
                    .unwrap_or(0.0)
        });
        println!(
            "{name}: empirical_max={:.3e} (n={n}, excl={}) sample={ts:.2}s sound={sound}",
            s.max_abs_error, s.excluded
        );
    };

    if which == "all" || which == "dqmom" {
        run("dqmom", fixed_suite("dqmom").unwrap(), &cfg, 100_000);
    }
    if which == "all" || which == "heat" {
        run("heat1d(10)", &gen_heat1d(10, 0.125, 0.0, 1.0), &cfg, 10_000);
        let mut w = cfg.clone();
        w.abstraction_enabled = true;
        w.min_depth = 5;
        w.max_depth = 10;
        run("heat1d(10)w", &gen_heat1d(10, 0.125, 0.0, 1.0), &w, 1000);
    }
    if which == "all" || which == "scan" {
        run("scan(1024)", &gen_scan(1024, -1.0, 1.0), &cfg, 2000);
        for (lo, hi) in [(4u32, 8u32), (8, 12), (12, 16)] {
            let mut w = cfg.clone();
            w.abstraction_enabled = true;
            w.min_depth = lo;
            w.max_depth = hi;
            run(
                &format!("scan w({lo},{hi})"),
                &gen_scan(1024, -1.0, 1.0),
                &w,
                100,
            );
        }
    }
    if which == "all" || which == "fdtd" {
        run("fdtd(10)", &gen_fdtd1d(10, 103, 0.0, 1.0), &cfg, 2000);
    }
    if which == "all" || which == "fft" {
        let p = gen_fft(64, 0.0, 1.0);
        println!("fft bin = {}", p.bin);
        run("fft64 re", &p.real, &cfg, 2000);
        run("fft64 im", &p.imag, &cfg, 2000);
    }
    if which == "all" || which == "lorenz" {
        let mut w = cfg.clone();
        w.abstraction_enabled = true;
        w.min_depth = 15;
        w.max_depth = 25;
        run("lorenz20 w(15,25)", &gen_lorenz(20, 28.0, 0.05, &[]), &w, 10_000);
    }
    if which == "fft1024" {
        let p = gen_fft(1024, 0.0, 1.0);
        let dag = parse_program(&p.real).unwrap();
        println!("fft1024 total ops = {}", dag.total_op_count());
    }
}
