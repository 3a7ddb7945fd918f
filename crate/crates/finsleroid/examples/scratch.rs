use finsleroid::conformal::{s_lower, s_upper};
use finsleroid::core::param::DeformParam;
use finsleroid::support::linalg::V4;
use finsleroid::support::numdiff::partial_r;

fn christoffel(par: &DeformParam, x: &V4, h_in: f64) -> [[[f64; 4]; 4]; 4] {
    let mut ds = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for p in 0..4 {
            for q in p..4 {
                let d = partial_r(|y: &V4| s_lower(par, y)[p][q], x, k, h_in);
                ds[k][p][q] = d;
                ds[k][q][p] = d;
            }
        }
    }
    let su = s_upper(par, x).unwrap();
    let mut gam = [[[0.0; 4]; 4]; 4];
    for m in 0..4 {
        for p in 0..4 {
            for q in 0..4 {
                let mut acc = 0.0;
                for t in 0..4 {
                    acc += su[m][t] * (ds[p][t][q] + ds[q][t][p] - ds[t][p][q]);
                }
                gam[m][p][q] = 0.5 * acc;
            }
        }
    }
    gam
}

fn riemann_max(par: &DeformParam, r: &V4, h_in: f64, h_out: f64, rich: bool) -> f64 {
    let mut dgam = [[[[0.0; 4]; 4]; 4]; 4];
    for k in 0..4 {
        let stencil = |h: f64| -> [[[f64; 4]; 4]; 4] {
            let shifted = |t: f64| {
                let mut x = *r;
                x[k] += t;
                christoffel(par, &x, h_in)
            };
            let gp1 = shifted(h);
            let gm1 = shifted(-h);
            let gp2 = shifted(2.0 * h);
            let gm2 = shifted(-2.0 * h);
            let mut d = [[[0.0; 4]; 4]; 4];
            for m in 0..4 {
                for p in 0..4 {
                    for q in 0..4 {
                        d[m][p][q] = (8.0 * (gp1[m][p][q] - gm1[m][p][q])
                            - (gp2[m][p][q] - gm2[m][p][q]))
                            / (12.0 * h);
                    }
                }
            }
            d
        };
        if rich {
            let coarse = stencil(h_out);
            let fine = stencil(0.5 * h_out);
            for m in 0..4 {
                for p in 0..4 {
                    for q in 0..4 {
                        dgam[k][m][p][q] = (16.0 * fine[m][p][q] - coarse[m][p][q]) / 15.0;
                    }
                }
            }
        } else {
            dgam[k] = stencil(h_out);
        }
    }
    let gam = christoffel(par, r, h_in);
    let mut worst: f64 = 0.0;
    for m in 0..4 {
        for p in 0..4 {
            for q in 0..4 {
                for t in 0..4 {
                    let mut v = dgam[q][m][p][t] - dgam[t][m][p][q];
                    for u in 0..4 {
                        v += gam[m][q][u] * gam[u][p][t] - gam[m][t][u] * gam[u][p][q];
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
    }
    worst
}

fn main() {
    let par = DeformParam::new(1.0).unwrap();
    let r: V4 = [
        1.3484737496021633,
        9.6496260236126948e-3,
        -1.4882615786342668e-1,
        -6.8580107981225780e-1,
    ];
    let scale = r[0].abs() + (r[1] * r[1] + r[2] * r[2] + r[3] * r[3]).sqrt();
    let base = 6e-4 * scale;
    for f in [2.0, 1.0, 0.5, 0.25, 0.125] {
        let h_in = base * f;
        for ratio in [10.0, 5.0, 20.0] {
            let w = riemann_max(&par, &r, h_in, ratio * h_in, true);
            let wp = riemann_max(&par, &r, h_in, ratio * h_in, false);
            println!("h_in={h_in:.3e} ratio={ratio:>4} rich={w:.3e} plain={wp:.3e}");
        }
    }
}
