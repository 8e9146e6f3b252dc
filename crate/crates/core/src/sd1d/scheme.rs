use super::mesh::{Boundary, SdMesh};
use super::system::HyperbolicSystem;
use super::SdError;
use crate::aderops::OdeRhs;

/// Rusanov (local Lax–Friedrichs) flux between states `l` and `r`.
pub fn rusanov<S: HyperbolicSystem + ?Sized>(sys: &S, l: &[f64], r: &[f64], out: &mut [f64]) {
    let q = sys.n_vars();
    let mut fl = vec![0.0; q];
    let mut fr = vec![0.0; q];
    sys.flux(l, &mut fl);
    sys.flux(r, &mut fr);
    let s = sys.max_speed(l).max(sys.max_speed(r));
    for i in 0..q {
        out[i] = 0.5 * (fl[i] + fr[i]) - 0.5 * s * (r[i] - l[i]);
    }
}

/// Flux values at every distinct flux point of the mesh: pointwise fluxes
/// inside elements and Rusanov fluxes at element interfaces. `out` has
/// `mesh.faces() * Q` entries.
pub fn face_fluxes<S: HyperbolicSystem + ?Sized>(
    mesh: &SdMesh,
    sys: &S,
    u: &[f64],
    out: &mut [f64],
) -> Result<(), SdError> {
    let q = sys.n_vars();
    let (k, np) = (mesh.elements(), mesh.points_per_element());
    let nf = np + 1;
    let interp = mesh.interp_matrix();
    let mut uf = vec![0.0; nf * q];
    let mut left = vec![0.0; k * q];
    let mut right = vec![0.0; k * q];
    for e in 0..k {
        interp.apply_blocks(&u[e * np * q..(e + 1) * np * q], q, &mut uf);
        for f in 1..nf - 1 {
            let g = mesh.face(e, f);
            sys.flux(&uf[f * q..(f + 1) * q], &mut out[g * q..(g + 1) * q]);
        }
        left[e * q..(e + 1) * q].copy_from_slice(&uf[..q]);
        right[e * q..(e + 1) * q].copy_from_slice(&uf[(nf - 1) * q..]);
    }
    let interfaces = match mesh.boundary() {
        Boundary::Periodic => k,
        Boundary::ZeroGradient => k + 1,
    };
    for i in 0..interfaces {
        let r = if i < k { &left[i * q..(i + 1) * q] } else { &right[(k - 1) * q..] };
        let l = if i > 0 {
            &right[(i - 1) * q..i * q]
        } else {
            match mesh.boundary() {
                Boundary::Periodic => &right[(k - 1) * q..],
                Boundary::ZeroGradient => r,
            }
        };
        let g = if i < k { mesh.face(i, 0) } else { mesh.face(k - 1, nf - 1) };
        rusanov(sys, l, r, &mut out[g * q..(g + 1) * q]);
    }
    for e in 0..k {
        for f in 0..nf {
            let g = mesh.face(e, f);
            if !out[g * q..(g + 1) * q].iter().all(|v| v.is_finite()) {
                return Err(SdError::NonFiniteFlux { element: e });
            }
        }
    }
    Ok(())
}

/// −∂ₓF_h at every solution point, given the flux-point values.
pub fn rhs_from_fluxes(mesh: &SdMesh, q: usize, fluxes: &[f64], out: &mut [f64]) {
    let (k, np) = (mesh.elements(), mesh.points_per_element());
    let d = mesh.deriv_matrix();
    for e in 0..k {
        let scale = -1.0 / mesh.widths()[e];
        for s in 0..np {
            let o = &mut out[(e * np + s) * q..(e * np + s + 1) * q];
            o.fill(0.0);
            for (f, &dsf) in d.row(s).iter().enumerate() {
                let g = mesh.face(e, f);
                for c in 0..q {
                    o[c] += dsf * fluxes[g * q + c];
                }
            }
            for v in o.iter_mut() {
                *v *= scale;
            }
        }
    }
}

/// Semidiscrete SD right-hand side, laid out like the state
/// (element, solution point, component).
pub fn semidiscrete_rhs<S: HyperbolicSystem + ?Sized>(
    mesh: &SdMesh,
    sys: &S,
    u: &[f64],
    out: &mut [f64],
) -> Result<(), SdError> {
    let q = sys.n_vars();
    let mut fluxes = vec![0.0; mesh.faces() * q];
    face_fluxes(mesh, sys, u, &mut fluxes)?;
    rhs_from_fluxes(mesh, q, &fluxes, out);
    Ok(())
}

/// Δt = C/(M+1) · Δx_min / v_max with v_max taken over all solution points.
pub fn cfl_dt<S: HyperbolicSystem + ?Sized>(mesh: &SdMesh, sys: &S, u: &[f64], c: f64) -> Result<f64, SdError> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(SdError::BadCfl(c));
    }
    let q = sys.n_vars();
    let v_max = u.chunks(q).map(|s| sys.max_speed(s)).fold(0.0, f64::max);
    if !(v_max > 0.0) || !v_max.is_finite() {
        return Err(SdError::NoWaveSpeed);
    }
    Ok(c / (mesh.degree() + 1) as f64 * mesh.min_width() / v_max)
}

/// The SD semidiscretization as an autonomous ODE. Evaluation failures are
/// reported to the engine as non-finite values.
#[derive(Debug, Clone, Copy)]
pub struct SdOde<'a, S: ?Sized> {
    pub mesh: &'a SdMesh,
    pub sys: &'a S,
}

impl<S: HyperbolicSystem + ?Sized> OdeRhs for SdOde<'_, S> {
    fn dim(&self) -> usize {
        self.mesh.subcells() * self.sys.n_vars()
    }

    fn eval(&self, _t: f64, u: &[f64], out: &mut [f64]) {
        if semidiscrete_rhs(self.mesh, self.sys, u, out).is_err() {
            out.fill(f64::NAN);
        }
    }

    fn is_autonomous(&self) -> bool {
        true
    }
}
