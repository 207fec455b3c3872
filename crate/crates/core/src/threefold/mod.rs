//! The nodal cubic threefold `X = V(G) ⊂ P⁴`, `G = F(y) - Q(y) y4`, the image
//! of `P³` under the cubics `ρ = (x0 Q : x1 Q : x2 Q : x3 Q : F)` through `C`.
//!
//! Lines on `X` come in two kinds: lines through the node `(0:0:0:0:1)`, one
//! for each point of `C`, and images of chords of `C`. A chord lying on `Q`
//! is a ruling line; its image collapses onto the node line of the third
//! point, which glues `γ_1(r)` to `γ_2(r)`.

mod census;
mod incidence;
mod secants;

pub use census::{fano_census, rational_sym_points, CensusReport};
pub use incidence::{remark_check, second_type_check, verify_incidence, IncidenceReport, RemarkReport, SecondTypeReport};
pub use secants::{common_secants, contributions_over, sample_chord_pair, Chord, Contribution, SecantCount, SECANT_BOUND, SECANT_FIELD};

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::binary::BinaryForm;
use crate::algebra::field::{embedding, Embedding, Fe, Field};
use crate::algebra::form::Form;
use crate::algebra::{linalg, Line};
use crate::curve::{jet_rows, CanonicalCurve, CurveError, CurvePoint, CurveView, ResidualError, SymPoint};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ThreefoldError {
    #[error("polynomial identity failed: {0}")]
    IdentityFailure(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Residual(#[from] ResidualError),
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
    #[error("common secant count did not stabilise by extension degree {bound}")]
    NotStabilized { bound: u32, weights: Vec<u64> },
    #[error("resample budget of {0} exhausted")]
    ResampleBudget(usize),
}

/// The node of `X`.
pub const NODE: [Fe; 5] = [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE];

/// Outcome of the symbolic checks run by [`build`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildCertificate {
    /// `G(ρ(x))` expanded to the zero polynomial.
    pub identity_holds: bool,
    /// Every partial of `G` vanishes at the node.
    pub singular_at_node: bool,
    /// Rank of the tangent cone at the node (4 for a node).
    pub tangent_cone_rank: usize,
    /// Number of terms of `G`.
    pub terms: usize,
}

pub struct CubicThreefold<'c> {
    curve: &'c CanonicalCurve,
    g: Form,
    certificate: BuildCertificate,
}

fn lift_to_p4(f: &Arc<Field>, form: &Form) -> Form {
    let vars: Vec<Form> = (0..4).map(|i| Form::variable(f, 5, i)).collect();
    form.compose(&vars)
}

/// `G = F(y0..y3) - Q(y0..y3) y4`.
pub fn threefold_equation(curve: &CanonicalCurve) -> Form {
    let f = curve.base();
    let y4 = Form::variable(f, 5, 4);
    lift_to_p4(f, curve.cubic()).sub(&lift_to_p4(f, curve.quadric()).mul(&y4))
}

/// The five cubics `ρ` through `C`.
pub fn rho(curve: &CanonicalCurve) -> [Form; 5] {
    let f = curve.base();
    let q = curve.quadric();
    std::array::from_fn(|i| if i < 4 { Form::variable(f, 4, i).mul(q) } else { curve.cubic().clone() })
}

/// Degree-2 part of `G` in the chart `y4 = 1`, as a quadric in `y0..y3`.
pub fn tangent_cone(g: &Form) -> Form {
    let f = g.field();
    let terms = g.terms().filter(|(e, _)| e[4] == 1).map(|(e, c)| (e[..4].to_vec(), c));
    Form::from_terms(f, 4, 2, terms).expect("degree-2 tail")
}

/// Construct `X` and verify `G ∘ ρ = 0` and the node symbolically.
pub fn build(curve: &CanonicalCurve) -> Result<CubicThreefold<'_>, ThreefoldError> {
    let g = threefold_equation(curve);
    let composed = g.compose(&rho(curve));
    if !composed.is_zero() {
        return Err(ThreefoldError::IdentityFailure(format!("G(rho(x)) = {composed:?}")));
    }
    let grad_zero = (0..5).all(|i| g.partial(i).eval(&NODE).is_zero());
    // no y4^3 or y4^2 terms: the node has multiplicity exactly two
    let low = g.terms().any(|(e, c)| e[4] >= 2 && !c.is_zero());
    if !grad_zero || low {
        return Err(ThreefoldError::IdentityFailure("X is smooth at (0:0:0:0:1)".into()));
    }
    let cone = tangent_cone(&g);
    let rank = linalg::rank(g.field(), &cone.polar_matrix());
    if rank != 4 {
        return Err(ThreefoldError::IdentityFailure(format!("tangent cone has rank {rank}")));
    }
    let certificate = BuildCertificate {
        identity_holds: true,
        singular_at_node: true,
        tangent_cone_rank: rank,
        terms: g.terms().count(),
    };
    Ok(CubicThreefold { curve, g, certificate })
}

impl<'c> CubicThreefold<'c> {
    pub fn curve(&self) -> &'c CanonicalCurve {
        self.curve
    }

    pub fn equation(&self) -> &Form {
        &self.g
    }

    pub fn certificate(&self) -> &BuildCertificate {
        &self.certificate
    }

    /// `G` over `F_{q^m}`.
    pub fn equation_over(&self, view: &CurveView) -> Form {
        self.g.map(&view.emb)
    }

    pub fn contains(&self, g: &Form, y: &[Fe; 5]) -> bool {
        g.eval(y).is_zero()
    }
}

/// `G` vanishes identically on the line (`g` over the line's field).
pub fn is_line_on(g: &Form, line: &Line<5>) -> bool {
    let [a, b] = line.basis();
    g.restrict_to_line(a, b).is_zero()
}

/// Two lines of `P⁴` meet; a line meets itself.
pub fn lines_meet(f: &Field, l1: &Line<5>, l2: &Line<5>) -> bool {
    l1.meets(f, l2)
}

/// The line joining the node and `(r : 0)`.
pub fn line_through_node(view: &CurveView, r: &CurvePoint) -> Result<Line<5>, ThreefoldError> {
    let f = &*view.field;
    let x = r.coords(f);
    if !view.contains(&x) {
        return Err(CurveError::NotOnCurve.into());
    }
    Ok(node_line(f, &x))
}

fn node_line(f: &Field, x: &[Fe; 4]) -> Line<5> {
    let v = [x[0], x[1], x[2], x[3], Fe::ZERO];
    Line::through(f, &NODE, &v).expect("the node is not on the hyperplane y4 = 0")
}

/// A point of the Fano surface of lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FanoPoint {
    /// Image of a chord not lying on `Q`; the line misses the node.
    Chord { pair: SymPoint, line: Line<5> },
    /// The line through the node and `(r : 0)`.
    Node { r: CurvePoint, line: Line<5> },
}

impl FanoPoint {
    pub fn line(&self) -> &Line<5> {
        match self {
            FanoPoint::Chord { line, .. } | FanoPoint::Node { line, .. } => line,
        }
    }

    pub fn is_node(&self) -> bool {
        matches!(self, FanoPoint::Node { .. })
    }

    /// The same point over the source field of `e`, when it is defined there.
    pub fn descend(&self, e: &Embedding) -> Option<FanoPoint> {
        match self {
            FanoPoint::Chord { pair, line } => Some(FanoPoint::Chord { pair: *pair, line: line.descend(e)? }),
            FanoPoint::Node { r, line } => Some(FanoPoint::Node { r: r.descend(e)?, line: line.descend(e)? }),
        }
    }
}

/// Second basis vector of the chord: `b`, or a tangent vector when `b = a`.
fn chord_direction(view: &CurveView, pair: &SymPoint) -> [Fe; 4] {
    let f = &*view.field;
    if pair.a == pair.b {
        jet_rows(view, &pair.a, 2)[1]
    } else {
        pair.b.coords(f)
    }
}

/// `ℓ_{ν(a+b)}`: the image under `ρ` of the chord through `a + b`, over the field of the pair.
///
/// On the chord `s a + t w`, `Q` and `F` restrict to `c st` and `st (α s + β t)`
/// (with `t²` for a tangent), so `ρ / st` is linear and spans a line. If `c = 0`
/// the chord is a ruling line with third point `β a - α w`.
pub fn chord_to_line(curve: &CanonicalCurve, pair: &SymPoint) -> FanoPoint {
    let view = curve.view(pair.field_m);
    let f = &*view.field;
    let a = pair.a.coords(f);
    let w = chord_direction(&view, pair);
    let tangent = pair.a == pair.b;
    let q = view.q.restrict_to_line(&a, &w);
    let cubic = view.f.restrict_to_line(&a, &w);
    // factor out st, or t² along a tangent
    let strip = |g: &BinaryForm| -> BinaryForm {
        let g = g.div_linear(f, Fe::ZERO, Fe::ONE).expect("vanishes at a");
        if tangent {
            g.div_linear(f, Fe::ZERO, Fe::ONE).expect("tangent contact")
        } else {
            g.div_linear(f, Fe::ONE, Fe::ZERO).expect("vanishes at b")
        }
    };
    let c = strip(&q).coeffs()[0];
    let lin = strip(&cubic);
    let (alpha, beta) = (lin.coeffs()[0], lin.coeffs()[1]);
    if c.is_zero() {
        let r: [Fe; 4] = std::array::from_fn(|i| f.sub(f.mul(beta, a[i]), f.mul(alpha, w[i])));
        let r = view.point(&r).expect("third point of a ruling line lies on C");
        return FanoPoint::Node { r, line: node_line(f, &r.coords(f)) };
    }
    let p0 = [f.mul(c, a[0]), f.mul(c, a[1]), f.mul(c, a[2]), f.mul(c, a[3]), alpha];
    let p1 = [f.mul(c, w[0]), f.mul(c, w[1]), f.mul(c, w[2]), f.mul(c, w[3]), beta];
    FanoPoint::Chord { pair: *pair, line: Line::through(f, &p0, &p1).expect("independent") }
}

/// `chord_to_line` followed by descent to `F_q` for a Frobenius-stable pair.
pub fn rational_fano_point(curve: &CanonicalCurve, pair: &SymPoint) -> Option<FanoPoint> {
    let fp = chord_to_line(curve, pair);
    let e = embedding(curve.base(), &curve.view(pair.field_m).field).ok()?;
    fp.descend(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{gamma, search};
    use crate::exec::Exec;

    #[test]
    fn build_certifies_identity_and_node() {
        for (p, k, seed) in [(7, 1, 1), (2, 3, 2), (3, 2, 3), (5, 1, 4)] {
            let hit = search(p, k, seed, 100, 2, Exec::Sequential).unwrap();
            let x = build(&hit.curve).unwrap();
            assert!(x.certificate().identity_holds);
            assert_eq!(x.certificate().tangent_cone_rank, 4);
            // oracle: the tail is -Q, and G(t v, 1) = t³ F(v) - t² Q(v) at random points
            assert_eq!(tangent_cone(x.equation()), hit.curve.quadric().neg());
            let f = hit.curve.base();
            for v in crate::algebra::proj::all_points::<4>(f).take(50) {
                let y = [v.0[0], v.0[1], v.0[2], v.0[3], Fe::ONE];
                let expect = f.sub(hit.curve.cubic().eval(&v.0), hit.curve.quadric().eval(&v.0));
                assert_eq!(x.equation().eval(&y), expect);
            }
        }
    }

    #[test]
    fn node_lines_lie_on_x_only_for_curve_points() {
        let hit = search(7, 1, 5, 100, 2, Exec::Sequential).unwrap();
        let x = build(&hit.curve).unwrap();
        let v = hit.curve.view(1);
        let f = &*v.field;
        for r in v.points() {
            assert!(is_line_on(x.equation(), &line_through_node(&v, r).unwrap()));
        }
        // points of Q off F give lines not on X; directions off Q as well
        let mut on = 0;
        for d in crate::algebra::proj::all_points::<4>(f) {
            if is_line_on(x.equation(), &node_line(f, &d.0)) {
                on += 1;
                assert!(v.contains(&d.0));
            }
        }
        assert_eq!(on, v.points().len());
    }

    #[test]
    fn chords_give_lines_on_x() {
        let hit = search(5, 1, 6, 100, 2, Exec::Sequential).unwrap();
        let c = &hit.curve;
        let x = build(c).unwrap();
        let v = c.view(1);
        let pts = v.points();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i..] {
                let fp = chord_to_line(c, &SymPoint::new(1, 1, *a, *b));
                assert!(is_line_on(x.equation(), fp.line()));
                let through_node = fp.line().contains(&v.field, &NODE);
                assert_eq!(through_node, fp.is_node());
            }
        }
        // gamma images collapse to the node line of their source point
        for r in pts {
            for i in [1, 2] {
                let g = gamma(c, &v, i, r).unwrap();
                match rational_fano_point(c, &g).unwrap() {
                    FanoPoint::Node { r: r2, line } => {
                        assert_eq!(r2, *r);
                        assert_eq!(line, line_through_node(&v, r).unwrap());
                    }
                    other => panic!("expected a node line, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn meeting_conventions() {
        let f = crate::algebra::field::field(5, 1).unwrap();
        let e = |i: usize| -> [Fe; 5] { std::array::from_fn(|j| if i == j { Fe::ONE } else { Fe::ZERO }) };
        let l1 = Line::through(&f, &e(0), &e(1)).unwrap();
        let l2 = Line::through(&f, &e(2), &e(3)).unwrap();
        let l3 = Line::through(&f, &e(1), &e(4)).unwrap();
        assert!(lines_meet(&f, &l1, &l1));
        assert!(!lines_meet(&f, &l1, &l2));
        assert!(lines_meet(&f, &l1, &l3));
        let n1 = Line::through(&f, &NODE, &e(0)).unwrap();
        let n2 = Line::through(&f, &NODE, &e(2)).unwrap();
        assert!(lines_meet(&f, &n1, &n2));
    }
}
