//! Straight-line benchmark generators: PDE stencils, leapfrog FDTD,
//! discretized Lorenz steps, Blelloch scan, radix-2 FFT datapaths, and
//! an embedded catalog of small fixed programs.
//!
//! Generators are deterministic text producers; all coefficients are
//! emitted as shortest-roundtrip literals so reparsing is exact.

mod fixed;

use crate::parse::parse_program;
use std::fmt::Write as _;

pub fn fixed_suite(name: &str) -> Option<&'static str> {
    fixed::CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| *src)
}

pub fn fixed_suite_names() -> Vec<&'static str> {
    fixed::CATALOG.iter().map(|(n, _)| *n).collect()
}

fn lit(x: f64) -> String {
    format!("{x:?}")
}

/// 3-point heat stencil unrolled over `steps`, grid `steps + 3` wide so
/// the output cone exactly covers the interior. Dirichlet boundaries
/// are pinned at the input interval's midpoint.
pub fn gen_heat1d(steps: u32, alpha: f64, lo: f64, hi: f64) -> String {
    let n = steps as usize + 3;
    let c1 = 1.0 - 2.0 * alpha;
    let boundary = lit((lo + hi) / 2.0);
    let mut s = String::from("INPUTS {\n");
    for i in 1..n - 1 {
        writeln!(s, "  u0_{i} fl64 : ({}, {});", lit(lo), lit(hi)).unwrap();
    }
    let center = n / 2;
    writeln!(s, "}}\nOUTPUTS {{ u{steps}_{center}; }}\nEXPRS {{").unwrap();
    let cell = |t: u32, i: usize| {
        if i == 0 || i == n - 1 {
            boundary.clone()
        } else {
            format!("u{t}_{i}")
        }
    };
    for t in 1..=steps {
        for i in 1..n - 1 {
            writeln!(
                s,
                "  u{t}_{i} = {} * {} + {} * ({} + {});",
                lit(c1),
                cell(t - 1, i),
                lit(alpha),
                cell(t - 1, i + 1),
                cell(t - 1, i - 1),
            )
            .unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// 5-point heat stencil on an `n x n` grid over `steps` steps; output is
/// the center cell. Boundaries are midpoint constants.
pub fn gen_heat2d(n: u32, steps: u32, alpha: f64, lo: f64, hi: f64) -> String {
    let n = n as usize;
    assert!(n >= 3 && steps >= 1);
    let c1 = 1.0 - 4.0 * alpha;
    let boundary = lit((lo + hi) / 2.0);
    let mut s = String::from("INPUTS {\n");
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            writeln!(s, "  u0_{i}_{j} fl64 : ({}, {});", lit(lo), lit(hi)).unwrap();
        }
    }
    let c = n / 2;
    writeln!(s, "}}\nOUTPUTS {{ u{steps}_{c}_{c}; }}\nEXPRS {{").unwrap();
    let cell = |t: u32, i: usize, j: usize| {
        if i == 0 || i == n - 1 || j == 0 || j == n - 1 {
            boundary.clone()
        } else {
            format!("u{t}_{i}_{j}")
        }
    };
    for t in 1..=steps {
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                writeln!(
                    s,
                    "  u{t}_{i}_{j} = {} * {} + {} * (({} + {}) + ({} + {}));",
                    lit(c1),
                    cell(t - 1, i, j),
                    lit(alpha),
                    cell(t - 1, i + 1, j),
                    cell(t - 1, i - 1, j),
                    cell(t - 1, i, j + 1),
                    cell(t - 1, i, j - 1),
                )
                .unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Leapfrog E/H updates over `steps`; `grid` is the E-field size. The
/// output is the center E cell at the final step.
pub fn gen_fdtd1d(steps: u32, grid: u32, lo: f64, hi: f64) -> String {
    let n = grid as usize;
    assert!(n >= 4 && steps >= 1);
    let boundary = lit((lo + hi) / 2.0);
    let mut s = String::from("INPUTS {\n");
    for i in 1..n - 1 {
        writeln!(s, "  e0_{i} fl64 : ({}, {});", lit(lo), lit(hi)).unwrap();
    }
    for i in 0..n - 1 {
        writeln!(s, "  h0_{i} fl64 : ({}, {});", lit(lo), lit(hi)).unwrap();
    }
    let center = n / 2;
    writeln!(s, "}}\nOUTPUTS {{ e{steps}_{center}; }}\nEXPRS {{").unwrap();
    let e_cell = |t: u32, i: usize| {
        if i == 0 || i == n - 1 {
            boundary.clone()
        } else {
            format!("e{t}_{i}")
        }
    };
    for t in 1..=steps {
        for i in 1..n - 1 {
            writeln!(
                s,
                "  e{t}_{i} = {} + 0.5 * (h{}_{i} - h{}_{});",
                e_cell(t - 1, i),
                t - 1,
                t - 1,
                i - 1,
            )
            .unwrap();
        }
        for i in 0..n - 1 {
            writeln!(
                s,
                "  h{t}_{i} = h{}_{i} + 0.5 * ({} - {});",
                t - 1,
                e_cell(t, i + 1),
                e_cell(t, i),
            )
            .unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// Discretized Lorenz recurrences unrolled `steps` times around the
/// initial point (1.2, 1.3, 1.6): a = 10, b = 8/3, dt = 0.005, `r`
/// configurable. `width` is the half-width of the input intervals;
/// names in `degenerate` get pinned to their center instead.
pub fn gen_lorenz(steps: u32, r: f64, width: f64, degenerate: &[&str]) -> String {
    assert!(steps >= 1);
    let b = 8.0 / 3.0;
    let dt = 0.005;
    let mut s = String::from("INPUTS {\n");
    for (name, center) in [("x0", 1.2), ("y0", 1.3), ("z0", 1.6)] {
        let w = if degenerate.contains(&&name[..1]) {
            0.0
        } else {
            width
        };
        writeln!(
            s,
            "  {name} fl64 : ({}, {});",
            lit(center - w),
            lit(center + w)
        )
        .unwrap();
    }
    writeln!(
        s,
        "}}\nOUTPUTS {{ x{steps}; y{steps}; z{steps}; }}\nEXPRS {{"
    )
    .unwrap();
    for k in 0..steps {
        let (k1, x, y, z) = (k + 1, format!("x{k}"), format!("y{k}"), format!("z{k}"));
        writeln!(s, "  xs{k} = {x} - {y};").unwrap();
        writeln!(s, "  xm{k} = 10.0 * xs{k};").unwrap();
        writeln!(s, "  xd{k} = xm{k} * {};", lit(dt)).unwrap();
        writeln!(s, "  x{k1} = {x} + xd{k};").unwrap();
        writeln!(s, "  p{k} = {x} * {z};").unwrap();
        writeln!(s, "  n{k} = -p{k};").unwrap();
        writeln!(s, "  q{k} = {} * {x};", lit(r)).unwrap();
        writeln!(s, "  s{k} = n{k} + q{k};").unwrap();
        writeln!(s, "  t{k} = s{k} - {y};").unwrap();
        writeln!(s, "  yd{k} = t{k} * {};", lit(dt)).unwrap();
        writeln!(s, "  y{k1} = {y} + yd{k};").unwrap();
        writeln!(s, "  g{k} = {x} * {y};").unwrap();
        writeln!(s, "  h{k} = {} * {z};", lit(b)).unwrap();
        writeln!(s, "  i{k} = g{k} - h{k};").unwrap();
        writeln!(s, "  zd{k} = i{k} * {};", lit(dt)).unwrap();
        writeln!(s, "  z{k1} = {z} + zd{k};").unwrap();
    }
    s.push_str("}\n");
    s
}

/// Expression handle with zero/sign folding for the emitters below.
#[derive(Clone, Debug, PartialEq)]
enum Ex {
    Zero,
    Lit(f64),
    Ref(String),
}

struct Emitter {
    body: String,
    counter: usize,
}

impl Emitter {
    fn new() -> Self {
        Emitter {
            body: String::new(),
            counter: 0,
        }
    }

    fn term(e: &Ex) -> String {
        match e {
            Ex::Zero => "0.0".into(),
            Ex::Lit(v) => lit(*v),
            Ex::Ref(n) => n.clone(),
        }
    }

    fn fresh(&mut self, rhs: String) -> Ex {
        let name = format!("t{}", self.counter);
        self.counter += 1;
        writeln!(self.body, "  {name} = {rhs};").unwrap();
        Ex::Ref(name)
    }

    fn add(&mut self, a: &Ex, b: &Ex) -> Ex {
        match (a, b) {
            (Ex::Zero, x) | (x, Ex::Zero) => x.clone(),
            _ => self.fresh(format!("{} + {}", Self::term(a), Self::term(b))),
        }
    }

    fn sub(&mut self, a: &Ex, b: &Ex) -> Ex {
        match (a, b) {
            (x, Ex::Zero) => x.clone(),
            (Ex::Zero, x) => self.neg(&x.clone()),
            _ => self.fresh(format!("{} - {}", Self::term(a), Self::term(b))),
        }
    }

    fn neg(&mut self, a: &Ex) -> Ex {
        match a {
            Ex::Zero => Ex::Zero,
            Ex::Lit(v) => Ex::Lit(-v),
            Ex::Ref(_) => self.fresh(format!("-{}", Self::term(a))),
        }
    }

    /// Multiply by a literal; +-1 and 0 fold away.
    fn mul_lit(&mut self, w: f64, a: &Ex) -> Ex {
        if w == 0.0 || *a == Ex::Zero {
            return Ex::Zero;
        }
        if w == 1.0 {
            return a.clone();
        }
        if w == -1.0 {
            return self.neg(a);
        }
        self.fresh(format!("{} * {}", lit(w), Self::term(a)))
    }
}

/// Blelloch work-efficient scan: upsweep reduction, downsweep exclusive
/// prefixes, then the inclusive fix-up. Output is the last prefix.
pub fn gen_scan(n: u32, lo: f64, hi: f64) -> String {
    assert!(n.is_power_of_two() && n >= 2);
    let n = n as usize;
    let mut inputs = String::from("INPUTS {\n");
    for i in 0..n {
        writeln!(inputs, "  x{i} fl64 : ({}, {});", lit(lo), lit(hi)).unwrap();
    }
    inputs.push_str("}\n");
    let mut em = Emitter::new();
    // Upsweep: levels[l][j] holds the sum of the 2^l-wide block j.
    let mut levels: Vec<Vec<Ex>> = vec![(0..n).map(|i| Ex::Ref(format!("x{i}"))).collect()];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap().clone();
        let mut next = Vec::with_capacity(prev.len() / 2);
        for j in 0..prev.len() / 2 {
            next.push(em.add(&prev[2 * j], &prev[2 * j + 1]));
        }
        levels.push(next);
    }
    // Downsweep: root gets zero; right children add the left sibling sum.
    let mut down: Vec<Ex> = vec![Ex::Zero];
    for l in (0..levels.len() - 1).rev() {
        let mut next = Vec::with_capacity(levels[l].len());
        for (j, parent) in down.iter().enumerate() {
            next.push(parent.clone());
            next.push(em.add(parent, &levels[l][2 * j]));
        }
        down = next;
    }
    // Inclusive fix-up for the whole sequence: y_i = x_i + exclusive_i.
    // The element comes first so these adds stay distinct from the
    // downsweep adds under deduplication. Output is the last prefix.
    let mut last = Ex::Zero;
    for (i, d) in down.iter().enumerate() {
        let x_i = Ex::Ref(format!("x{i}"));
        last = em.add(&x_i, d);
    }
    let out = match &last {
        Ex::Ref(name) => name.clone(),
        _ => unreachable!("last prefix always sums at least two values"),
    };
    format!("{inputs}OUTPUTS {{ {out}; }}\nEXPRS {{\n{}}}\n", em.body)
}

pub struct FftPrograms {
    pub real: String,
    pub imag: String,
    /// Output bin (the one with the largest datapath).
    pub bin: usize,
}

#[derive(Clone)]
struct C {
    re: Ex,
    im: Ex,
}

fn twiddle(k: usize, n: usize) -> (f64, f64) {
    // Exact values on the axes; rounded literals elsewhere.
    if k == 0 {
        (1.0, 0.0)
    } else if 4 * k == n {
        (0.0, -1.0)
    } else if 2 * k == n {
        (-1.0, 0.0)
    } else if 4 * k == 3 * n {
        (0.0, 1.0)
    } else {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
        (theta.cos(), -theta.sin())
    }
}

/// Radix-2 decimation-in-time FFT over real inputs, emitted as two
/// straight-line programs (real and imaginary datapaths of one output
/// bin) sharing the same input set and body.
pub fn gen_fft(n: u32, lo: f64, hi: f64) -> FftPrograms {
    assert!(n.is_power_of_two() && n >= 2);
    let n = n as usize;
    let log_n = n.trailing_zeros();
    let mut inputs = String::from("INPUTS {\n");
    for i in 0..n {
        writeln!(inputs, "  x{i} fl64 : ({}, {});", lit(lo), lit(hi)).unwrap();
    }
    inputs.push_str("}\n");

    let mut em = Emitter::new();
    // Bit-reversed load; inputs are real.
    let mut data: Vec<C> = (0..n)
        .map(|i| {
            let r = (i as u64).reverse_bits() >> (64 - log_n);
            C {
                re: Ex::Ref(format!("x{r}")),
                im: Ex::Zero,
            }
        })
        .collect();
    let mut m = 2;
    while m <= n {
        let half = m / 2;
        for base in (0..n).step_by(m) {
            for j in 0..half {
                let (wr, wi) = twiddle(j * (n / m), n);
                let b = data[base + j + half].clone();
                // t = W * b
                let t = C {
                    re: {
                        let p = em.mul_lit(wr, &b.re);
                        let q = em.mul_lit(wi, &b.im);
                        em.sub(&p, &q)
                    },
                    im: {
                        let p = em.mul_lit(wr, &b.im);
                        let q = em.mul_lit(wi, &b.re);
                        em.add(&p, &q)
                    },
                };
                let u = data[base + j].clone();
                data[base + j] = C {
                    re: em.add(&u.re, &t.re),
                    im: em.add(&u.im, &t.im),
                };
                data[base + j + half] = C {
                    re: em.sub(&u.re, &t.re),
                    im: em.sub(&u.im, &t.im),
                };
            }
        }
        m *= 2;
    }

    // Alias the outputs so OUTPUTS can reference them even when a path
    // folded to a constant.
    let mut body = em.body.clone();
    let mut alias = |name: &str, e: &Ex, body: &mut String| match e {
        Ex::Ref(n) => n.clone(),
        _ => {
            writeln!(body, "  {name} = {};", Emitter::term(e)).unwrap();
            name.to_string()
        }
    };

    // Pick the bin with the widest datapath. All mid bins tie at large
    // n; scanning every bin is cheap only at bench scale.
    let candidates: Vec<usize> = if n <= 64 {
        (0..n).collect()
    } else {
        vec![1, n / 2 - 1, n / 2 + 1, n - 1]
    };
    let mut best = (0usize, 0usize);
    for &b in &candidates {
        let mut probe_body = body.clone();
        let mut a2 = |name: &str, e: &Ex, body: &mut String| match e {
            Ex::Ref(n) => n.clone(),
            _ => {
                writeln!(body, "  {name} = {};", Emitter::term(e)).unwrap();
                name.to_string()
            }
        };
        let re_name = a2("fft_re", &data[b].re, &mut probe_body);
        let im_name = a2("fft_im", &data[b].im, &mut probe_body);
        let text = format!(
            "{inputs}OUTPUTS {{ {re_name}; {im_name}; }}\nEXPRS {{\n{probe_body}}}\n"
        );
        let dag = parse_program(&text).expect("generated fft parses");
        let roots = dag.output_ids();
        let ops = dag
            .reachable_from(&roots)
            .iter()
            .filter(|&&id| dag.node(id).op.is_arith())
            .count();
        if ops > best.1 {
            best = (b, ops);
        }
    }
    let bin = best.0;
    let re_name = alias("fft_re", &data[bin].re, &mut body);
    let im_name = alias("fft_im", &data[bin].im, &mut body);
    let real = format!("{inputs}OUTPUTS {{ {re_name}; }}\nEXPRS {{\n{body}}}\n");
    let imag = format!("{inputs}OUTPUTS {{ {im_name}; }}\nEXPRS {{\n{body}}}\n");
    FftPrograms { real, imag, bin }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::HpFloat;
    use crate::shadow::eval_pair;

    fn within_pct(actual: usize, expected: usize, pct: f64) -> bool {
        let lo = expected as f64 * (1.0 - pct);
        let hi = expected as f64 * (1.0 + pct);
        (actual as f64) >= lo && (actual as f64) <= hi
    }

    #[test]
    fn heat1d_op_counts_match() {
        let p10 = parse_program(&gen_heat1d(10, 0.125, 0.0, 1.0)).unwrap();
        assert!(
            within_pct(p10.total_op_count(), 442, 0.15),
            "heat1d(10): {}",
            p10.total_op_count()
        );
        let p32 = parse_program(&gen_heat1d(32, 0.125, 0.0, 1.0)).unwrap();
        assert!(
            within_pct(p32.total_op_count(), 4226, 0.15),
            "heat1d(32): {}",
            p32.total_op_count()
        );
        // The late steps narrow to the output cone; the program body
        // still carries the full interior.
        let (_, out) = p10.outputs[0].clone();
        assert_eq!(p10.op_count(out), 320);
    }

    #[test]
    fn heat1d_single_step_small() {
        let p = parse_program(&gen_heat1d(1, 0.125, 0.0, 1.0)).unwrap();
        let (_, out) = p.outputs[0].clone();
        assert!(p.op_count(out) >= 4 && p.op_count(out) <= 6);
    }

    #[test]
    fn heat_reference_simulation_agrees() {
        let steps = 4u32;
        let text = gen_heat1d(steps, 0.125, 0.0, 1.0);
        let dag = parse_program(&text).unwrap();
        let m = dag.inputs.len();
        let point: Vec<f64> = (0..m).map(|i| 0.1 + 0.07 * i as f64).collect();
        let (_, hp) = eval_pair(&dag, &point);
        let (_, out) = dag.outputs[0].clone();
        let got = hp[out.index()].to_f64();
        // Dense-array reference in shadow arithmetic.
        let n = m + 2;
        let mut grid: Vec<HpFloat> = Vec::new();
        grid.push(HpFloat::from_f64(0.5));
        grid.extend(point.iter().map(|&x| HpFloat::from_f64(x)));
        grid.push(HpFloat::from_f64(0.5));
        let (c1, al) = (HpFloat::from_f64(0.75), HpFloat::from_f64(0.125));
        for _ in 0..steps {
            let mut next = grid.clone();
            for i in 1..n - 1 {
                let fl = grid[i + 1].add(&grid[i - 1]);
                next[i] = c1.mul(&grid[i]).add(&al.mul(&fl));
            }
            grid = next;
        }
        let want = grid[n / 2].to_f64();
        assert!(
            ((got - want) / want).abs() < 1e-12,
            "center: {got} vs {want}"
        );
    }

    #[test]
    fn fdtd_op_counts_match() {
        let p10 = parse_program(&gen_fdtd1d(10, 103, 0.0, 1.0)).unwrap();
        assert!(
            within_pct(p10.total_op_count(), 6173, 0.15),
            "fdtd(10): {}",
            p10.total_op_count()
        );
        // fdtd(64) at the paper's scale: count without parsing 192k ops
        // here; the generator is linear in steps, so check a midsize one.
        let p4 = parse_program(&gen_fdtd1d(4, 502, 0.0, 1.0)).unwrap();
        let per_step = p4.total_op_count() / 4;
        let predicted64 = per_step * 64;
        assert!(
            within_pct(predicted64, 192_811, 0.15),
            "fdtd(64) predicted: {predicted64}"
        );
    }

    #[test]
    fn fdtd_reference_simulation_agrees() {
        let (steps, grid) = (3u32, 8u32);
        let text = gen_fdtd1d(steps, grid, 0.0, 1.0);
        let dag = parse_program(&text).unwrap();
        let n = grid as usize;
        let m = dag.inputs.len();
        assert_eq!(m, (n - 2) + (n - 1));
        let point: Vec<f64> = (0..m).map(|i| 0.03 * i as f64 + 0.1).collect();
        let (_, hp) = eval_pair(&dag, &point);
        let (_, out) = dag.outputs[0].clone();
        let got = hp[out.index()].to_f64();

        let mut e: Vec<HpFloat> = vec![HpFloat::from_f64(0.5); n];
        for i in 1..n - 1 {
            e[i] = HpFloat::from_f64(point[i - 1]);
        }
        let mut h: Vec<HpFloat> = (0..n - 1)
            .map(|i| HpFloat::from_f64(point[n - 2 + i]))
            .collect();
        let half = HpFloat::from_f64(0.5);
        for _ in 0..steps {
            let mut en = e.clone();
            for i in 1..n - 1 {
                en[i] = e[i].add(&half.mul(&h[i].sub(&h[i - 1])));
            }
            en[0] = HpFloat::from_f64(0.5);
            en[n - 1] = HpFloat::from_f64(0.5);
            for i in 0..n - 1 {
                h[i] = h[i].add(&half.mul(&en[i + 1].sub(&en[i])));
            }
            e = en;
        }
        let want = e[n / 2].to_f64();
        assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn lorenz_op_counts_and_depth() {
        for (k, expect) in [(20u32, 307usize), (40, 607), (70, 1057)] {
            let p = parse_program(&gen_lorenz(k, 28.0, 0.05, &[])).unwrap();
            assert!(
                within_pct(p.total_op_count(), expect, 0.15),
                "lorenz{k}: {} vs {expect}",
                p.total_op_count()
            );
        }
        let p = parse_program(&gen_lorenz(20, 28.0, 0.05, &[])).unwrap();
        let d = p.max_output_depth();
        assert!((80..=100).contains(&d), "depth {d}");
    }

    #[test]
    fn lorenz_single_step_hand_check() {
        // One step from the paper's initial point.
        let text = gen_lorenz(1, 28.0, 0.0, &[]);
        let dag = parse_program(&text).unwrap();
        let (_, hp) = eval_pair(&dag, &[1.2, 1.3, 1.6]);
        let (x, y, z) = (1.2f64, 1.3, 1.6);
        let (a, b, r, dt) = (10.0, 8.0 / 3.0, 28.0, 0.005);
        let want = [
            x + a * (x - y) * dt,
            y + (-x * z + r * x - y) * dt,
            z + (x * y - b * z) * dt,
        ];
        for (k, w) in want.iter().enumerate() {
            let (_, id) = dag.outputs[k].clone();
            let got = hp[id.index()].to_f64();
            assert!(((got - w) / w).abs() < 1e-15, "output {k}: {got} vs {w}");
        }
    }

    #[test]
    fn lorenz_degenerate_inputs() {
        let text = gen_lorenz(2, 28.0, 0.05, &["x", "z"]);
        let dag = parse_program(&text).unwrap();
        assert_eq!(dag.inputs[0].range.width(), 0.0);
        assert!(dag.inputs[1].range.width() > 0.0);
        assert_eq!(dag.inputs[2].range.width(), 0.0);
    }

    #[test]
    fn scan_op_counts_and_sum() {
        let p = parse_program(&gen_scan(1024, -1.0, 1.0)).unwrap();
        assert!(
            within_pct(p.total_op_count(), 3060, 0.15),
            "scan: {}",
            p.total_op_count()
        );
        let p2 = parse_program(&gen_scan(2, 0.0, 1.0)).unwrap();
        let (_, out2) = p2.outputs[0].clone();
        assert_eq!(p2.op_count(out2), 1);

        // The last prefix is the exact sum in shadow arithmetic at
        // dyadic points.
        let p16 = parse_program(&gen_scan(16, 0.0, 1.0)).unwrap();
        let point: Vec<f64> = (0..16).map(|i| (i as f64) * 0.125).collect();
        let (_, hp) = eval_pair(&p16, &point);
        let (_, out) = p16.outputs[0].clone();
        let want: f64 = point.iter().sum();
        assert_eq!(hp[out.index()].to_f64(), want);
    }

    #[test]
    fn fft_small_structure() {
        let two = gen_fft(2, 0.0, 1.0);
        let dag = parse_program(&two.real).unwrap();
        // One butterfly on real inputs: x0 + x1 and x0 - x1 only.
        assert!(dag.total_op_count() <= 2, "{}", dag.total_op_count());
    }

    #[test]
    fn fft_matches_direct_dft() {
        let n = 8usize;
        let progs = gen_fft(n as u32, 0.0, 1.0);
        let dag_re = parse_program(&progs.real).unwrap();
        let dag_im = parse_program(&progs.imag).unwrap();
        let point: Vec<f64> = (0..n).map(|i| 0.11 + 0.09 * i as f64).collect();
        let (_, hp_re) = eval_pair(&dag_re, &point);
        let (_, hp_im) = eval_pair(&dag_im, &point);
        let (_, out_re) = dag_re.outputs[0].clone();
        let (_, out_im) = dag_im.outputs[0].clone();
        let got_re = hp_re[out_re.index()].to_f64();
        let got_im = hp_im[out_im.index()].to_f64();
        // O(n^2) direct DFT oracle.
        let k = progs.bin as f64;
        let (mut want_re, mut want_im) = (0.0f64, 0.0f64);
        for (j, &x) in point.iter().enumerate() {
            let th = -2.0 * std::f64::consts::PI * k * j as f64 / n as f64;
            want_re += x * th.cos();
            want_im += x * th.sin();
        }
        assert!(
            (got_re - want_re).abs() <= want_re.abs().max(1.0) * 1e-12,
            "re {got_re} vs {want_re}"
        );
        assert!(
            (got_im - want_im).abs() <= want_im.abs().max(1.0) * 1e-12,
            "im {got_im} vs {want_im}"
        );
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_heat1d(6, 0.125, 0.0, 1.0), gen_heat1d(6, 0.125, 0.0, 1.0));
        assert_eq!(gen_scan(64, -1.0, 1.0), gen_scan(64, -1.0, 1.0));
        assert_eq!(gen_fft(16, 0.0, 1.0).real, gen_fft(16, 0.0, 1.0).real);
        assert_eq!(
            gen_lorenz(5, 28.0, 0.01, &[]),
            gen_lorenz(5, 28.0, 0.01, &[])
        );
    }

    #[test]
    fn all_fixed_programs_parse_and_evaluate() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
        for name in fixed_suite_names() {
            let src = fixed_suite(name).unwrap();
            let dag = parse_program(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            for _ in 0..100 {
                let point: Vec<f64> = dag
                    .inputs
                    .iter()
                    .map(|v| {
                        if v.range.lo == v.range.hi {
                            v.range.lo
                        } else {
                            rng.gen_range(v.range.lo..=v.range.hi)
                        }
                    })
                    .collect();
                let (fp, hp) = eval_pair(&dag, &point);
                for (_, id) in &dag.outputs {
                    assert!(fp[id.index()].is_finite(), "{name} fp not finite");
                    assert!(hp[id.index()].is_finite(), "{name} hp not finite");
                }
            }
        }
        assert!(fixed_suite_names().len() >= 20);
        assert!(fixed_suite("no_such_bench").is_none());
    }

    #[test]
    fn dqmom_and_kepler2_op_counts() {
        // Counts are shared-node counts: the repeated a/w quotients in
        // dqmom collapse under deduplication, so these sit below a
        // per-occurrence textual count.
        let d = parse_program(fixed_suite("dqmom").unwrap()).unwrap();
        let (_, out) = d.outputs[0].clone();
        assert_eq!(d.op_count(out), 28);
        let k = parse_program(fixed_suite("kepler2").unwrap()).unwrap();
        let (_, out) = k.outputs[0].clone();
        assert_eq!(k.op_count(out), 36);
    }
}
