use std::collections::HashMap;

use crate::algebra::FreeBasisCert;
use crate::error::{Error, Result};
use crate::exactla::Budget;
use crate::modcx::{ChainComplex, Module, Term};

use super::cone::Resolution;
use super::free::{FreeComplex, TMatrix};

/// Two-sided bar resolution B ⊗ B^{⊗n} ⊗ M -> M over the ground field,
/// F_n in cohomological degree -n. Generator of F_n: (b_1, .., b_n, m) in
/// mixed radix, m fastest.
pub fn bar_resolution(cert: &FreeBasisCert, m: &Module, length: usize, budget: &Budget) -> Result<Resolution> {
    if !cert.base_is_ground() {
        return Err(Error::Unsupported("bar resolution relative to a base other than the ground field".into()));
    }
    let alg = m.algebra().clone();
    if !alg.same_tables(cert.algebra()) {
        return Err(Error::InvalidInput("module is not over the certified algebra".into()));
    }
    let f = alg.field();
    let t = alg.dim();
    let md = m.dim();
    let mut ranks = Vec::with_capacity(length + 1);
    for n in 0..=length {
        let kdim = t.saturating_pow(n as u32 + 1).saturating_mul(md);
        budget.check_count(kdim)?;
        ranks.push(t.pow(n as u32) * md);
    }
    let index = |bs: &[usize], mi: usize| -> usize {
        let mut g = 0;
        for &b in bs {
            g = g * t + b;
        }
        g * md + mi
    };
    let decode = |n: usize, mut g: usize| -> (Vec<usize>, usize) {
        let mi = g % md;
        g /= md;
        let mut bs = vec![0; n];
        for k in (0..n).rev() {
            bs[k] = g % t;
            g /= t;
        }
        (bs, mi)
    };
    // tdiffs[n] : F_n -> F_{n-1} in homological terms
    let mut tdiffs: Vec<TMatrix> = Vec::with_capacity(length + 1);
    for n in 0..=length {
        let rows = if n == 0 { 0 } else { ranks[n - 1] };
        let mut d = TMatrix::zeros(rows, ranks[n], t);
        if n > 0 {
            for g in 0..ranks[n] {
                let (bs, mi) = decode(n, g);
                // i = 0: b_1 moves into the coefficient
                let target = index(&bs[1..], mi);
                let slot = d.get_mut(target, g);
                slot[bs[0]] = f.add(slot[bs[0]], 1);
                // inner products b_i b_{i+1}
                for i in 1..n {
                    let sign = f.sign(i as i64);
                    let prod = alg.basis_product(bs[i - 1], bs[i]);
                    let mut acc: HashMap<usize, u32> = HashMap::new();
                    for (c, &v) in prod.iter().enumerate() {
                        if v == 0 {
                            continue;
                        }
                        let mut nb = bs[..i - 1].to_vec();
                        nb.push(c);
                        nb.extend_from_slice(&bs[i + 1..]);
                        let e = acc.entry(index(&nb, mi)).or_insert(0);
                        *e = f.add(*e, f.mul(sign, v));
                    }
                    for (target, v) in acc {
                        let slot = d.get_mut(target, g);
                        slot[0..t].iter_mut().zip(alg.unit()).for_each(|(s, &u)| *s = f.mul_add(*s, v, u));
                    }
                }
                // last: b_n acts on m
                let sign = f.sign(n as i64);
                let col = m.action()[bs[n - 1]].column(mi);
                for (mj, &v) in col.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    let target = index(&bs[..n - 1], mj);
                    let slot = d.get_mut(target, g);
                    slot.iter_mut().zip(alg.unit()).for_each(|(s, &u)| *s = f.mul_add(*s, f.mul(sign, v), u));
                }
            }
        }
        tdiffs.push(d);
    }
    // cohomological order: degree -length .. 0; diff from -n to -n+1 is tdiffs[n]
    let lo = -(length as i32);
    let ranks_c: Vec<usize> = (0..=length).rev().map(|n| ranks[n]).collect();
    let mut diffs_c: Vec<TMatrix> = (1..=length).rev().map(|n| tdiffs[n].clone()).collect();
    diffs_c.push(TMatrix::zeros(0, ranks[0], t));
    let free = FreeComplex::new(alg.clone(), lo, ranks_c, diffs_c)?;
    let mut images: Vec<Vec<Vec<u32>>> = vec![Vec::new(); length];
    images.push(
        (0..md)
            .map(|i| {
                let mut v = vec![0; md];
                v[i] = 1 % f.p();
                v
            })
            .collect(),
    );
    let target = ChainComplex::concentrated(m.clone(), 0);
    Ok(Resolution { target, free, images, bottom: lo, complete: false })
}
