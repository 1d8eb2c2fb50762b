
use super::coeffs::{taylor_coeffs_dual, taylor_coeffs_tight};
use crate::error::{GaborError, Result};
use crate::zak::{apply_block_operator, block_gram, ZakFactorization};

/// Whether each polynomial term is divided by its own norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermScaling {
    Norm,
    Raw,
}

fn accumulate(acc: Option<ZakFactorization>, term: &ZakFactorization, w: f64, scaling: TermScaling) -> ZakFactorization {
    let w = match scaling {
        TermScaling::Norm => w / term.norm(),
        TermScaling::Raw => w,
    };
    match acc {
        None => term.scale(w),
        Some(acc) => acc.combine(1.0, term, w).expect("same lattice"),
    }
}

/// γ_{k+1} = Σ_j a_{m,j} S_k^j γ_k (each term norm-scaled under [`TermScaling::Norm`]).
pub fn step_tight(phi: &ZakFactorization, m: usize, scaling: TermScaling) -> ZakFactorization {
    let coeffs = taylor_coeffs_tight(m);
    let sk = block_gram(phi, phi).expect("same lattice");
    let mut term = phi.clone();
    let mut acc = None;
    for (j, a) in coeffs.iter().enumerate() {
        acc = Some(accumulate(acc, &term, *a, scaling));
        if j + 1 < coeffs.len() {
            term = apply_block_operator(&sk, &term).expect("same lattice");
        }
    }
    acc.expect("m >= 1")
}

/// γ_{k+1} = Σ_j b_{m,j} Z_k^j γ_k with Z_k^{2r}γ_k = (S S_k)^r γ_k and
/// Z_k^{2r+1}γ_k = (S S_k)^r S_k g.
pub fn step_dual(
    phi: &ZakFactorization,
    phi_g: &ZakFactorization,
    m: usize,
    scaling: TermScaling,
) -> Result<ZakFactorization> {
    let coeffs = taylor_coeffs_dual(m);
    let s = block_gram(phi_g, phi_g)?;
    let sk = block_gram(phi, phi)?;
    let ssk = s.compose(&sk)?;
    let mut even = phi.clone();
    let mut odd = if m > 1 { Some(apply_block_operator(&sk, phi_g)?) } else { None };
    let mut acc = None;
    for (j, b) in coeffs.iter().enumerate() {
        if j % 2 == 0 {
            acc = Some(accumulate(acc, &even, *b, scaling));
            if j + 2 < coeffs.len() {
                even = apply_block_operator(&ssk, &even)?;
            }
        } else {
            let t = odd.take().expect("odd term");
            acc = Some(accumulate(acc, &t, *b, scaling));
            if j + 2 < coeffs.len() {
                odd = Some(apply_block_operator(&ssk, &t)?);
            } else {
                odd = Some(t);
            }
        }
    }
    Ok(acc.expect("m >= 1"))
}

/// γ_{k+1} = ½ γ_k/‖γ_k‖ + ½ S_k^{-1}γ_k/‖S_k^{-1}γ_k‖ (blockwise Cholesky solve).
pub fn step_frame_inverse(phi: &ZakFactorization) -> Result<ZakFactorization> {
    let sk = block_gram(phi, phi)?.symmetrized();
    let solved: Vec<_> = sk
        .blocks()
        .iter()
        .zip(phi.blocks())
        .map(|(a, x)| {
            a.clone()
                .cholesky()
                .map(|c| c.solve(x))
                .ok_or(GaborError::LostFrameProperty)
        })
        .collect::<Result<_>>()?;
    let inv = ZakFactorization::from_blocks(*phi.lattice(), solved)?;
    if !inv.is_finite() {
        return Err(GaborError::LostFrameProperty);
    }
    phi.scale(0.5 / phi.norm()).combine(1.0, &inv, 0.5 / inv.norm())
}

/// All blocks divided by √B̂, i.e. g ↦ g/√B̂ and S ↦ S/B̂.
pub fn initial_scale(phi: &ZakFactorization, bhat: f64) -> ZakFactorization {
    phi.scale(1.0 / bhat.sqrt())
}
