//! Empirical validation: high-precision shadow evaluation, seeded
//! max-error sampling, and the runtime relative-error profile.

use crate::hp::HpFloat;
use crate::ir::{ExprDag, NodeId, Op, Precision};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// One weekend's worth of samples distilled: the observed worst case.
#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub n_samples: u64,
    pub seed: u64,
    /// Max |hp - fp| over all outputs and samples (corners included).
    pub max_abs_error: f64,
    pub argmax_point: Vec<f64>,
    pub argmax_output: String,
    /// Samples dropped because the working-precision run produced
    /// NaN/Inf (reported, never silently ignored).
    pub excluded: u64,
    pub per_output: Vec<OutputMax>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputMax {
    pub name: String,
    pub max_abs_error: f64,
    pub argmax_point: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileReport {
    pub n_samples: u64,
    pub seed: u64,
    pub valid_samples: u64,
    pub excluded: u64,
    /// min over samples of Q = qsat - qshadow; > 0 means the static
    /// bound dominated the observed relative error everywhere.
    pub q_min: f64,
    pub q_median: f64,
    pub q_max: f64,
    pub bits_lost_max: f64,
}

/// Working-precision and shadow evaluation of the whole DAG at a point.
/// Working precision follows each node's declared format with round to
/// nearest; the shadow runs the same graph in 113-bit arithmetic.
pub fn eval_pair(dag: &ExprDag, point: &[f64]) -> (Vec<f64>, Vec<HpFloat>) {
    debug_assert_eq!(point.len(), dag.inputs.len());
    let mut fp: Vec<f64> = Vec::with_capacity(dag.nodes.len());
    let mut hp: Vec<HpFloat> = Vec::with_capacity(dag.nodes.len());
    for node in &dag.nodes {
        let (f, h) = match node.op {
            Op::Input => {
                let x = point[node.input_idx.unwrap()];
                let rounded = round_to(x, dag.inputs[node.input_idx.unwrap()].precision);
                (rounded, HpFloat::from_f64(rounded))
            }
            Op::Const => {
                let c = node.literal.unwrap();
                (c, HpFloat::from_f64(c))
            }
            op => {
                let a = fp[node.children[0].index()];
                let ah = hp[node.children[0].index()];
                let exact = match op {
                    Op::Neg => (-a, ah.neg()),
                    Op::Sqrt => (a.sqrt(), ah.sqrt()),
                    Op::Exp => (a.exp(), ah.exp()),
                    Op::Log => (a.ln(), ah.ln()),
                    Op::Sin => (a.sin(), ah.sin()),
                    Op::Cos => (a.cos(), ah.cos()),
                    _ => {
                        let b = fp[node.children[1].index()];
                        let bh = hp[node.children[1].index()];
                        match op {
                            Op::Add => (a + b, ah.add(&bh)),
                            Op::Sub => (a - b, ah.sub(&bh)),
                            Op::Mul => (a * b, ah.mul(&bh)),
                            Op::Div => (a / b, ah.div(&bh)),
                            _ => unreachable!(),
                        }
                    }
                };
                (round_to(exact.0, node.precision), exact.1)
            }
        };
        fp.push(f);
        hp.push(h);
    }
    (fp, hp)
}

/// Round-to-nearest into the node's format. Binary64 ops are already
/// rounded by the hardware; binary32 re-rounds the double result, which
/// is exact for the elementary operations (2p + 2 <= 53).
fn round_to(x: f64, p: Precision) -> f64 {
    match p {
        Precision::Fl64 => x,
        Precision::Fl32 => x as f32 as f64,
    }
}

fn sample_point(dag: &ExprDag, rng: &mut ChaCha8Rng) -> Vec<f64> {
    dag.inputs
        .iter()
        .map(|v| {
            if v.range.lo == v.range.hi {
                v.range.lo
            } else {
                rng.gen_range(v.range.lo..=v.range.hi)
            }
        })
        .collect()
}

fn corner_points(dag: &ExprDag) -> Vec<Vec<f64>> {
    let m = dag.inputs.len();
    if m == 0 || m > 12 {
        return vec![];
    }
    (0..(1usize << m))
        .map(|mask| {
            dag.inputs
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if mask >> i & 1 == 0 {
                        v.range.lo
                    } else {
                        v.range.hi
                    }
                })
                .collect()
        })
        .collect()
}

struct SampleOutcome {
    err: f64,
    output_idx: usize,
    point: Vec<f64>,
    index: u64,
    excluded: bool,
    per_output: Vec<f64>,
}

fn eval_sample(dag: &ExprDag, point: Vec<f64>, index: u64) -> SampleOutcome {
    let (fp, hp) = eval_pair(dag, &point);
    let mut per_output = Vec::with_capacity(dag.outputs.len());
    let mut worst = 0.0f64;
    let mut worst_idx = 0;
    let mut excluded = false;
    for (k, (_, id)) in dag.outputs.iter().enumerate() {
        let f = fp[id.index()];
        let h = hp[id.index()];
        if !f.is_finite() || !h.is_finite() {
            excluded = true;
            per_output.push(f64::NAN);
            continue;
        }
        let err = h.sub(&HpFloat::from_f64(f)).abs().to_f64();
        per_output.push(err);
        if err > worst {
            worst = err;
            worst_idx = k;
        }
    }
    SampleOutcome {
        err: worst,
        output_idx: worst_idx,
        point,
        index,
        excluded,
        per_output,
    }
}

/// `n` seeded uniform samples per input interval plus the deterministic
/// corner probes; the result is bit-identical for a given seed at any
/// thread count.
pub fn sample_max_error(dag: &ExprDag, n: u64, seed: u64) -> SampleReport {
    let corners = corner_points(dag);
    let n_corner = corners.len() as u64;
    let outcomes: Vec<SampleOutcome> = corners
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| eval_sample(dag, p, i as u64))
        .chain((0..n).into_par_iter().map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let p = sample_point(dag, &mut rng);
            eval_sample(dag, p, n_corner + i)
        }))
        .collect();

    let mut excluded = 0u64;
    let mut per_output: Vec<OutputMax> = dag
        .outputs
        .iter()
        .map(|(name, _)| OutputMax {
            name: name.clone(),
            max_abs_error: 0.0,
            argmax_point: vec![],
        })
        .collect();
    let mut best: Option<&SampleOutcome> = None;
    for o in &outcomes {
        if o.excluded {
            excluded += 1;
            continue;
        }
        // Deterministic argmax: strict improvement, lowest index wins ties.
        if best.map_or(true, |b| o.err > b.err) {
            best = Some(o);
        }
        for (k, e) in o.per_output.iter().enumerate() {
            if *e > per_output[k].max_abs_error {
                per_output[k].max_abs_error = *e;
                per_output[k].argmax_point = o.point.clone();
            }
        }
    }
    let (max_abs_error, argmax_point, argmax_output) = match best {
        Some(b) => (
            b.err,
            b.point.clone(),
            dag.outputs[b.output_idx].0.clone(),
        ),
        None => (0.0, vec![], String::new()),
    };
    let _ = outcomes.iter().map(|o| o.index).max(); // indices kept for csv hooks
    SampleReport {
        n_samples: n,
        seed,
        max_abs_error,
        argmax_point,
        argmax_output,
        excluded,
        per_output,
    }
}

#[derive(Debug, Clone)]
pub struct ProfileRow {
    pub index: u64,
    pub fp: f64,
    pub hp: f64,
    pub abs_err: f64,
    pub q: f64,
    pub bits_lost: f64,
}

/// Relative-error profile of the first output against a static bound:
/// per sample, qsat = bound/|fp|, qshadow = |hp - fp|/|hp|,
/// Q = qsat - qshadow, and bits lost = p - log2(qshadow/u), clamped to
/// [0, p]. Samples with |fp| or |hp| under 1e-300 are excluded.
pub fn relative_profile(
    dag: &ExprDag,
    bound: f64,
    n: u64,
    seed: u64,
) -> (ProfileReport, Vec<ProfileRow>) {
    let (_, out_id) = dag.outputs[0].clone();
    let prec = dag.node(out_id).precision;
    let p_bits = prec.mantissa_bits() as f64;
    let u = prec.unit_roundoff();
    let rows: Vec<Option<ProfileRow>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let point = sample_point(dag, &mut rng);
            let (fp, hp) = eval_pair(dag, &point);
            let f = fp[out_id.index()];
            let h = hp[out_id.index()];
            if !f.is_finite() || !h.is_finite() {
                return None;
            }
            let hf = h.to_f64();
            if f.abs() < 1e-300 || hf.abs() < 1e-300 {
                return None;
            }
            let abs_err = h.sub(&HpFloat::from_f64(f)).abs().to_f64();
            let qsat = bound / f.abs();
            let qshadow = abs_err / hf.abs();
            let q = qsat - qshadow;
            let bits_lost = if qshadow == 0.0 {
                0.0
            } else {
                (p_bits - (qshadow / u).log2()).clamp(0.0, p_bits)
            };
            Some(ProfileRow {
                index: i,
                fp: f,
                hp: hf,
                abs_err,
                q,
                bits_lost,
            })
        })
        .collect();

    let excluded = rows.iter().filter(|r| r.is_none()).count() as u64;
    let mut valid: Vec<ProfileRow> = rows.into_iter().flatten().collect();
    valid.sort_by(|a, b| a.q.total_cmp(&b.q));
    let report = ProfileReport {
        n_samples: n,
        seed,
        valid_samples: valid.len() as u64,
        excluded,
        q_min: valid.first().map_or(f64::NAN, |r| r.q),
        q_median: if valid.is_empty() {
            f64::NAN
        } else {
            valid[valid.len() / 2].q
        },
        q_max: valid.last().map_or(f64::NAN, |r| r.q),
        bits_lost_max: valid
            .iter()
            .map(|r| r.bits_lost)
            .fold(0.0f64, f64::max),
    };
    valid.sort_by_key(|r| r.index);
    (report, valid)
}

pub fn write_profile_csv<W: Write>(mut w: W, rows: &[ProfileRow]) -> std::io::Result<()> {
    writeln!(w, "index,fp,hp,abs_err,q,bits_lost")?;
    for r in rows {
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e},{}",
            r.index, r.fp, r.hp, r.abs_err, r.q, r.bits_lost
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    #[test]
    fn absorption_witness() {
        // (1e16 + 1) - 1e16: double loses the 1, the shadow keeps it.
        let dag = parse_program(
            "INPUTS { x fl64 : (1e16, 1e16); } OUTPUTS { s; } EXPRS { s = (x + 1.0) - x; }",
        )
        .unwrap();
        let (fp, hp) = eval_pair(&dag, &[1e16]);
        let (_, out) = dag.outputs[0].clone();
        assert_eq!(fp[out.index()], 0.0);
        assert_eq!(hp[out.index()].to_f64(), 1.0);
    }

    #[test]
    fn constant_program_shadow_equals_fp() {
        let dag = parse_program(
            "INPUTS { x fl64 : (0.0, 1.0); } OUTPUTS { s; } EXPRS { s = 0.5 * 8.0; }",
        )
        .unwrap();
        let (fp, hp) = eval_pair(&dag, &[0.3]);
        let (_, out) = dag.outputs[0].clone();
        assert_eq!(fp[out.index()], hp[out.index()].to_f64());
    }

    #[test]
    fn single_rounding_of_decimal_literal() {
        let dag = parse_program(
            "INPUTS { x fl64 : (0.0, 1.0); } OUTPUTS { s; } EXPRS { s = x * 0.1; }",
        )
        .unwrap();
        let (fp, hp) = eval_pair(&dag, &[1.0]);
        let (_, out) = dag.outputs[0].clone();
        let diff = (fp[out.index()] - hp[out.index()].to_f64()).abs();
        assert!(diff < (2f64).powi(-53) * 0.1);
    }

    #[test]
    fn degenerate_intervals_sample_one_point() {
        let dag = parse_program(
            "INPUTS { x fl64 : (2.0, 2.0); y fl64 : (3.0, 3.0); } OUTPUTS { s; } EXPRS { s = x * y; }",
        )
        .unwrap();
        let r = sample_max_error(&dag, 100, 7);
        // 2*3 = 6 exact: zero error at every (identical) sample.
        assert_eq!(r.max_abs_error, 0.0);
        assert_eq!(r.excluded, 0);
    }

    #[test]
    fn seeded_reproducibility_across_thread_counts() {
        let dag = parse_program(
            "INPUTS { a fl64 : (0.0, 1.0); b fl64 : (0.0, 1.0); c fl64 : (0.0, 1.0); } OUTPUTS { s; } EXPRS { s = (a + b) * (b + c) * (a - c); }",
        )
        .unwrap();
        let r1 = sample_max_error(&dag, 5000, 42);
        let r2 = sample_max_error(&dag, 5000, 42);
        assert_eq!(r1.max_abs_error.to_bits(), r2.max_abs_error.to_bits());
        assert_eq!(r1.argmax_point, r2.argmax_point);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let r3 = pool.install(|| sample_max_error(&dag, 5000, 42));
        assert_eq!(r1.max_abs_error.to_bits(), r3.max_abs_error.to_bits());
        assert_eq!(r1.argmax_point, r3.argmax_point);
    }

    #[test]
    fn fl32_rounding_is_visible() {
        let dag = parse_program(
            "INPUTS { x fl32 : (1.0, 2.0); } OUTPUTS { s; } EXPRS { s = x * x * x; }",
        )
        .unwrap();
        let r = sample_max_error(&dag, 2000, 3);
        // Errors the size of fl32 ulps, far above fl64 ulps.
        assert!(r.max_abs_error > 1e-8, "{}", r.max_abs_error);
        assert!(r.max_abs_error < 1e-5);
    }

    #[test]
    fn profile_q_positive_with_dominating_bound() {
        let dag = parse_program(
            "INPUTS { x fl64 : (0.5, 2.0); y fl64 : (0.5, 2.0); } OUTPUTS { s; } EXPRS { s = (x + y) * (x - y) + x * y; }",
        )
        .unwrap();
        // A generous (but honest) bound: 10 ops * max|value| * u.
        let bound = 1e-14;
        let (report, rows) = relative_profile(&dag, bound, 2000, 9);
        assert!(report.q_min > 0.0, "q_min {}", report.q_min);
        assert_eq!(report.valid_samples + report.excluded, 2000);
        assert!(report.bits_lost_max <= 53.0);
        let mut csv = Vec::new();
        write_profile_csv(&mut csv, &rows).unwrap();
        assert!(csv.starts_with(b"index,fp,hp,abs_err,q,bits_lost"));
    }

    #[test]
    fn bits_lost_boundary() {
        // qshadow == u gives bits_lost = p: the formula's boundary.
        let p = 53.0f64;
        let u = (2f64).powi(-53);
        let qshadow: f64 = u;
        let bits = (p - (qshadow / u).log2()).clamp(0.0, p);
        assert_eq!(bits, 53.0);
    }
}
