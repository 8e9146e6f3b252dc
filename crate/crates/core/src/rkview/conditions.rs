use super::ButcherTableau;

/// Largest absolute residual of each simplifying-assumption family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderResiduals {
    /// B(p): Σᵢ bᵢ cᵢ^{z−1} = 1/z, z = 1..p.
    pub b: f64,
    /// C(η): Σⱼ aᵢⱼ cⱼ^{z−1} = cᵢ^z / z, z = 1..η.
    pub c: f64,
    /// D(ζ): Σᵢ bᵢ cᵢ^{z−1} aᵢⱼ = bⱼ(1 − cⱼ^z)/z, z = 1..ζ.
    pub d: f64,
}

pub fn order_condition_residuals(t: &ButcherTableau, p: usize, eta: usize, zeta: usize) -> OrderResiduals {
    let s = t.stages();
    let pw = |x: f64, e: usize| x.powi(e as i32);
    let mut rb: f64 = 0.0;
    for z in 1..=p {
        let lhs: f64 = (0..s).map(|i| t.b[i] * pw(t.c[i], z - 1)).sum();
        rb = rb.max((lhs - 1.0 / z as f64).abs());
    }
    let mut rc: f64 = 0.0;
    for z in 1..=eta {
        for i in 0..s {
            let lhs: f64 = (0..s).map(|j| t.a[(i, j)] * pw(t.c[j], z - 1)).sum();
            rc = rc.max((lhs - pw(t.c[i], z) / z as f64).abs());
        }
    }
    let mut rd: f64 = 0.0;
    for z in 1..=zeta {
        for j in 0..s {
            let lhs: f64 = (0..s).map(|i| t.b[i] * pw(t.c[i], z - 1) * t.a[(i, j)]).sum();
            rd = rd.max((lhs - t.b[j] * (1.0 - pw(t.c[j], z)) / z as f64).abs());
        }
    }
    OrderResiduals { b: rb, c: rc, d: rd }
}
