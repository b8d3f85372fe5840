//! Isomorphism search for quantales and inverse semigroups.

use crate::lattice::Elem;
use crate::quantale::Quantale;
use crate::semigroup::InverseSemigroup;

/// A quantale isomorphism `a → b` as an element table, if one exists.
///
/// Candidates are bijections of join-irreducibles preserving order both ways
/// and commuting with the involution; each is extended by joins and checked.
pub fn quantale_iso(a: &Quantale, b: &Quantale) -> Option<Vec<Elem>> {
    let (fa, fb) = (a.frame(), b.frame());
    let ja = fa.join_irreducibles().to_vec();
    let jb = fb.join_irreducibles().to_vec();
    if a.len() != b.len() || ja.len() != jb.len() {
        return None;
    }
    let profile = |q: &Quantale, j: Elem| {
        let f = q.frame();
        (
            f.down_set(j).len(),
            f.elements().filter(|&x| f.leq(j, x)).count(),
            q.star(j) == j,
            q.mul(j, j) == j,
        )
    };
    let pa: Vec<_> = ja.iter().map(|&j| profile(a, j)).collect();
    let pb: Vec<_> = jb.iter().map(|&j| profile(b, j)).collect();
    let mut phi = vec![usize::MAX; ja.len()];
    let mut used = vec![false; jb.len()];
    let mut out = None;

    fn rec(
        i: usize,
        ctx: &Ctx,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Option<Vec<Elem>>,
    ) {
        if out.is_some() {
            return;
        }
        let (a, b) = (ctx.a, ctx.b);
        if i == ctx.ja.len() {
            let table: Vec<Elem> = a
                .elements()
                .map(|x| {
                    b.frame().join_all(
                        (0..ctx.ja.len())
                            .filter(|&t| a.leq(ctx.ja[t], x))
                            .map(|t| ctx.jb[phi[t]]),
                    )
                })
                .collect();
            let mut seen = vec![false; b.len()];
            for &y in &table {
                if seen[y] {
                    return;
                }
                seen[y] = true;
            }
            let ok = a.elements().all(|x| {
                table[a.star(x)] == b.star(table[x])
                    && a.elements().all(|y| table[a.mul(x, y)] == b.mul(table[x], table[y]))
            });
            if ok {
                *out = Some(table);
            }
            return;
        }
        for c in 0..ctx.jb.len() {
            if used[c] || ctx.pa[i] != ctx.pb[c] {
                continue;
            }
            let consistent = (0..i).all(|t| {
                a.leq(ctx.ja[t], ctx.ja[i]) == b.leq(ctx.jb[phi[t]], ctx.jb[c])
                    && a.leq(ctx.ja[i], ctx.ja[t]) == b.leq(ctx.jb[c], ctx.jb[phi[t]])
                    && (a.star(ctx.ja[i]) != ctx.ja[t] || b.star(ctx.jb[c]) == ctx.jb[phi[t]])
            });
            if consistent {
                used[c] = true;
                phi[i] = c;
                rec(i + 1, ctx, phi, used, out);
                used[c] = false;
            }
        }
    }

    struct Ctx<'a> {
        a: &'a Quantale,
        b: &'a Quantale,
        ja: Vec<Elem>,
        jb: Vec<Elem>,
        pa: Vec<(usize, usize, bool, bool)>,
        pb: Vec<(usize, usize, bool, bool)>,
    }
    let ctx = Ctx { a, b, ja, jb, pa, pb };
    rec(0, &ctx, &mut phi, &mut used, &mut out);
    out
}

/// A semigroup isomorphism `a → b` as an element table, if one exists.
pub fn semigroup_iso(a: &InverseSemigroup, b: &InverseSemigroup) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let profile = |s: &InverseSemigroup, x: usize| {
        let mut powers = vec![x];
        while let Some(&p) = powers.last() {
            let q = s.mul(p, x);
            if powers.contains(&q) {
                break;
            }
            powers.push(q);
        }
        (
            s.is_idempotent(x),
            powers.len(),
            s.down_set(x).len(),
            (0..s.len()).filter(|&t| s.leq(x, t)).count(),
        )
    };
    let pa: Vec<_> = (0..n).map(|x| profile(a, x)).collect();
    let pb: Vec<_> = (0..n).map(|x| profile(b, x)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    // Most constrained elements first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| pb.iter().filter(|&&p| p == pa[x]).count());
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if rec(0, &order, a, b, &pa, &pb, &mut f, &mut used) {
        Some(f)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn rec(
    k: usize,
    order: &[usize],
    a: &InverseSemigroup,
    b: &InverseSemigroup,
    pa: &[(bool, usize, usize, usize)],
    pb: &[(bool, usize, usize, usize)],
    f: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if k == order.len() {
        return true;
    }
    let x = order[k];
    for y in 0..b.len() {
        if used[y] || pa[x] != pb[y] {
            continue;
        }
        f[x] = y;
        let ok = order[..=k].iter().all(|&p| {
            let ip = a.inv(p);
            (f[ip] == usize::MAX || f[ip] == b.inv(f[p]))
                && order[..=k].iter().all(|&q| {
                    let pq = a.mul(p, q);
                    f[pq] == usize::MAX || f[pq] == b.mul(f[p], f[q])
                })
        });
        if ok {
            used[y] = true;
            if rec(k + 1, order, a, b, pa, pb, f, used) {
                return true;
            }
            used[y] = false;
        }
        f[x] = usize::MAX;
    }
    false
}
