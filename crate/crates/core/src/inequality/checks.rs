use crate::function::RealFunction;
use crate::operator::{EvalPoint, OperatorError};
use crate::special::{gamma, PositiveReal};

use super::{
    BoundingQuadruple, ConstantBounds, HolderPair, InequalityChecker, InequalityError,
    InequalityReport, ReportParams, TheoremId,
};

/// Every link of the Minkowski-type bound, in proof order:
/// `lhs ≤ young ≤ intermediate ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkowskiChain {
    pub lhs: f64,
    /// `(1/p) D^(-α){x^p} + (1/q) D^(-α){y^q}`
    pub young: f64,
    /// `M^p/(p(M+1)^p) D^(-α){(x+y)^p} + 1/(q(m+1)^q) D^(-α){(x+y)^q}`
    pub intermediate: f64,
    pub bound: f64,
}

/// `(ln t)^(α+β) / (Γ(α+1) Γ(β+1))`.
pub fn two_order_prefactor_explicit(
    alpha: PositiveReal,
    beta: PositiveReal,
    t: EvalPoint,
) -> Result<f64, OperatorError> {
    let (a, b) = (alpha.get(), beta.get());
    Ok(t.ln().powf(a + b) / (gamma(a + 1.0)? * gamma(b + 1.0)?))
}

const PREFACTOR_CROSS_CHECK: f64 = 1e-8;

fn params(alpha: PositiveReal, beta: Option<PositiveReal>, t: EvalPoint) -> ReportParams {
    ReportParams {
        alpha: alpha.get(),
        beta: beta.map(PositiveReal::get),
        t: t.get(),
        p: None,
        q: None,
    }
}

impl InequalityChecker {
    /// `D{v1 v2 x²} D{u1 u2 y²} ≤ ¼ (D{(u1 v1 + u2 v2) x y})²`, all of order `α`.
    pub fn polya_szego_single(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        env: &BoundingQuadruple,
        alpha: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        let d = self.discretize(alpha, t)?;
        let pts = self.check_points(t, &[&d]);
        self.require_envelope("x", x, &env.u1, &env.u2, &pts)?;
        self.require_envelope("y", y, &env.v1, &env.v2, &pts)?;

        let (xs, ys) = (d.values(x)?, d.values(y)?);
        let (u1, u2, v1, v2) = (
            d.values(&env.u1)?,
            d.values(&env.u2)?,
            d.values(&env.v1)?,
            d.values(&env.v2)?,
        );
        let a = d.integral(|i| v1[i] * v2[i] * xs[i] * xs[i])?;
        let b = d.integral(|i| u1[i] * u2[i] * ys[i] * ys[i])?;
        let c = d.integral(|i| (v1[i] * u1[i] + v2[i] * u2[i]) * xs[i] * ys[i])?;

        Ok(InequalityReport::new(
            TheoremId::T31,
            a * b,
            0.25 * c * c,
            params(alpha, None, t),
            self.tolerance,
        ))
    }

    /// `D^α{u1u2} D^β{v1v2} D^α{x²} D^β{y²} ≤ ¼ (D^α{u1x} D^β{v1y} + D^α{u2x} D^β{v2y})²`.
    pub fn polya_szego_double(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        env: &BoundingQuadruple,
        alpha: PositiveReal,
        beta: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        let da = self.discretize(alpha, t)?;
        let db = self.discretize(beta, t)?;
        let pts_x = self.check_points(t, &[&da]);
        let pts_y = self.check_points(t, &[&db]);
        self.require_envelope("x", x, &env.u1, &env.u2, &pts_x)?;
        self.require_envelope("y", y, &env.v1, &env.v2, &pts_y)?;

        let (xs, u1, u2) = (da.values(x)?, da.values(&env.u1)?, da.values(&env.u2)?);
        let (ys, v1, v2) = (db.values(y)?, db.values(&env.v1)?, db.values(&env.v2)?);
        let uu = da.integral(|i| u1[i] * u2[i])?;
        let vv = db.integral(|i| v1[i] * v2[i])?;
        let xx = da.integral(|i| xs[i] * xs[i])?;
        let yy = db.integral(|i| ys[i] * ys[i])?;
        let u1x = da.integral(|i| u1[i] * xs[i])?;
        let u2x = da.integral(|i| u2[i] * xs[i])?;
        let v1y = db.integral(|i| v1[i] * ys[i])?;
        let v2y = db.integral(|i| v2[i] * ys[i])?;

        let lhs = uu * vv * xx * yy;
        let bound = 0.25 * (u1x * v1y + u2x * v2y).powi(2);
        Ok(InequalityReport::new(
            TheoremId::T32,
            lhs,
            bound,
            params(alpha, Some(beta), t),
            self.tolerance,
        ))
    }

    /// `D^α{x²} D^β{y²} ≤ D^α{u2 x y / v1} D^β{v2 x y / u1}`.
    pub fn product_bound(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        env: &BoundingQuadruple,
        alpha: PositiveReal,
        beta: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        let da = self.discretize(alpha, t)?;
        let db = self.discretize(beta, t)?;
        // both orders integrate products of x and y
        let pts = self.check_points(t, &[&da, &db]);
        self.require_envelope("x", x, &env.u1, &env.u2, &pts)?;
        self.require_envelope("y", y, &env.v1, &env.v2, &pts)?;

        let (xa, ya, u2a, v1a) = (
            da.values(x)?,
            da.values(y)?,
            da.values(&env.u2)?,
            da.values(&env.v1)?,
        );
        let (xb, yb, v2b, u1b) = (
            db.values(x)?,
            db.values(y)?,
            db.values(&env.v2)?,
            db.values(&env.u1)?,
        );
        let lhs = da.integral(|i| xa[i] * xa[i])? * db.integral(|i| yb[i] * yb[i])?;
        let bound = da.integral(|i| u2a[i] * xa[i] * ya[i] / v1a[i])?
            * db.integral(|i| v2b[i] * xb[i] * yb[i] / u1b[i])?;
        Ok(InequalityReport::new(
            TheoremId::T33,
            lhs,
            bound,
            params(alpha, Some(beta), t),
            self.tolerance,
        ))
    }

    fn require_constant_bounds(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        cb: &ConstantBounds,
        pts: &[f64],
    ) -> Result<(), InequalityError> {
        let (m, big_m) = cb.x_bounds();
        let (n, big_n) = cb.y_bounds();
        self.require_envelope("x", x, &m.into(), &big_m.into(), pts)?;
        self.require_envelope("y", y, &n.into(), &big_n.into(), pts)
    }

    /// `D{x²} D{y²} / (D{xy})² ≤ ¼ (√(mn/MN) + √(MN/mn))²`.
    pub fn constant_polya_szego(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        cb: &ConstantBounds,
        alpha: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        let d = self.discretize(alpha, t)?;
        self.require_constant_bounds(x, y, cb, &self.check_points(t, &[&d]))?;
        let (xs, ys) = (d.values(x)?, d.values(y)?);
        let xx = d.integral(|i| xs[i] * xs[i])?;
        let yy = d.integral(|i| ys[i] * ys[i])?;
        let xy = d.integral(|i| xs[i] * ys[i])?;
        let lhs = xx * yy / (xy * xy);
        Ok(InequalityReport::new(
            TheoremId::P31,
            lhs,
            cb.polya_szego_constant(),
            params(alpha, None, t),
            self.tolerance,
        ))
    }

    /// `[(ln t)^(α+β)/(Γ(α+1)Γ(β+1))] D^α{x²} D^β{y²} / (D^α{x} D^β{y})²`
    /// against the same constant as [`Self::constant_polya_szego`].
    ///
    /// The prefactor is evaluated as `D^α{1} D^β{1}` with the same rules as
    /// the other integrals, and cross-checked against the closed form.
    pub fn constant_polya_szego_two_order(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        cb: &ConstantBounds,
        alpha: PositiveReal,
        beta: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        let da = self.discretize(alpha, t)?;
        let db = self.discretize(beta, t)?;
        let (m, big_m) = cb.x_bounds();
        let (n, big_n) = cb.y_bounds();
        self.require_envelope(
            "x",
            x,
            &m.into(),
            &big_m.into(),
            &self.check_points(t, &[&da]),
        )?;
        self.require_envelope(
            "y",
            y,
            &n.into(),
            &big_n.into(),
            &self.check_points(t, &[&db]),
        )?;

        let prefactor = da.integral(|_| 1.0)? * db.integral(|_| 1.0)?;
        let explicit = two_order_prefactor_explicit(alpha, beta, t)?;
        if ((prefactor - explicit) / explicit).abs() > PREFACTOR_CROSS_CHECK {
            return Err(InequalityError::Parameter(format!(
                "quadrature prefactor {prefactor} disagrees with closed form {explicit}; increase the node count"
            )));
        }

        let (xs, ys) = (da.values(x)?, db.values(y)?);
        let xx = da.integral(|i| xs[i] * xs[i])?;
        let yy = db.integral(|i| ys[i] * ys[i])?;
        let x1 = da.integral(|i| xs[i])?;
        let y1 = db.integral(|i| ys[i])?;
        let lhs = prefactor * xx * yy / (x1 * y1).powi(2);
        Ok(InequalityReport::new(
            TheoremId::P32,
            lhs,
            cb.polya_szego_constant(),
            params(alpha, Some(beta), t),
            self.tolerance,
        ))
    }

    /// `D^α{x²} D^β{y²} ≤ (MN/(mn)) D^α{xy} D^β{xy}`.
    pub fn ratio_bound_constant(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        cb: &ConstantBounds,
        alpha: PositiveReal,
        beta: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        let da = self.discretize(alpha, t)?;
        let db = self.discretize(beta, t)?;
        self.require_constant_bounds(x, y, cb, &self.check_points(t, &[&da, &db]))?;
        let (xa, ya) = (da.values(x)?, da.values(y)?);
        let (xb, yb) = (db.values(x)?, db.values(y)?);
        let lhs = da.integral(|i| xa[i] * xa[i])? * db.integral(|i| yb[i] * yb[i])?;
        let bound =
            cb.spread() * da.integral(|i| xa[i] * ya[i])? * db.integral(|i| xb[i] * yb[i])?;
        Ok(InequalityReport::new(
            TheoremId::P33,
            lhs,
            bound,
            params(alpha, Some(beta), t),
            self.tolerance,
        ))
    }

    /// All links of the Minkowski-type bound under `0 < m < x/y < M`.
    #[allow(clippy::too_many_arguments)]
    pub fn minkowsky_chain(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        hp: HolderPair,
        m: f64,
        big_m: f64,
        alpha: PositiveReal,
        t: EvalPoint,
    ) -> Result<MinkowskiChain, InequalityError> {
        if !(m > 0.0 && m < big_m && big_m.is_finite()) {
            return Err(InequalityError::Parameter(format!(
                "ratio bounds need 0 < m < M < inf, got ({m}, {big_m})"
            )));
        }
        let d = self.discretize(alpha, t)?;
        for &ln_tau in &self.check_points(t, &[&d]) {
            let (xv, yv) = (x.eval_ln(ln_tau)?, y.eval_ln(ln_tau)?);
            let ratio = xv / yv;
            if !(xv > 0.0 && yv > 0.0 && ratio > m && ratio < big_m) {
                return Err(InequalityError::Hypothesis {
                    what: format!("x/y = {ratio} is outside ({m}, {big_m})"),
                    tau: ln_tau.exp(),
                });
            }
        }

        let (p, q) = (hp.p(), hp.q());
        let (xs, ys) = (d.values(x)?, d.values(y)?);
        let lhs = d.integral(|i| xs[i] * ys[i])?;
        let young = d.integral(|i| xs[i].powf(p))? / p + d.integral(|i| ys[i].powf(q))? / q;
        let sum_p = d.integral(|i| (xs[i] + ys[i]).powf(p))?;
        let sum_q = d.integral(|i| (xs[i] + ys[i]).powf(q))?;
        let coef_p = big_m.powf(p) / (p * (big_m + 1.0).powf(p));
        let coef_q = 1.0 / (q * (m + 1.0).powf(q));
        let intermediate = coef_p * sum_p + coef_q * sum_q;
        let pow_p = d.integral(|i| xs[i].powf(p) + ys[i].powf(p))?;
        let pow_q = d.integral(|i| xs[i].powf(q) + ys[i].powf(q))?;
        let bound = coef_p * 2f64.powf(p - 1.0) * pow_p + coef_q * 2f64.powf(q - 1.0) * pow_q;
        Ok(MinkowskiChain {
            lhs,
            young,
            intermediate,
            bound,
        })
    }

    /// `D{xy} ≤ 2^(p-1) M^p/(p(M+1)^p) D{x^p + y^p} + 2^(q-1)/(q(m+1)^q) D{x^q + y^q}`.
    #[allow(clippy::too_many_arguments)]
    pub fn minkowsky_related(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        hp: HolderPair,
        m: f64,
        big_m: f64,
        alpha: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        let chain = self.minkowsky_chain(x, y, hp, m, big_m, alpha, t)?;
        let mut params = params(alpha, None, t);
        params.p = Some(hp.p());
        params.q = Some(hp.q());
        Ok(InequalityReport::new(
            TheoremId::T34,
            chain.lhs,
            chain.bound,
            params,
            self.tolerance,
        ))
    }

    /// `D{xy} ≤ (1/p) D{x^p} + (1/q) D{y^q}` for `x, y ≥ 0`.
    pub fn young_pointwise_check(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        hp: HolderPair,
        alpha: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        let d = self.discretize(alpha, t)?;
        let pts = self.check_points(t, &[&d]);
        self.require_nonnegative("x", x, &pts)?;
        self.require_nonnegative("y", y, &pts)?;
        let (p, q) = (hp.p(), hp.q());
        let (xs, ys) = (d.values(x)?, d.values(y)?);
        let lhs = d.integral(|i| xs[i] * ys[i])?;
        let bound = d.integral(|i| xs[i].powf(p))? / p + d.integral(|i| ys[i].powf(q))? / q;
        let mut params = params(alpha, None, t);
        params.p = Some(p);
        params.q = Some(q);
        Ok(InequalityReport::new(
            TheoremId::Young,
            lhs,
            bound,
            params,
            self.tolerance,
        ))
    }

    /// `D{(x+y)^r} ≤ 2^(r-1) D{x^r + y^r}` for `x, y ≥ 0`, `r > 1`.
    /// The exponent is reported in the `p` slot.
    pub fn power_mean_check(
        &self,
        x: &RealFunction,
        y: &RealFunction,
        r: f64,
        alpha: PositiveReal,
        t: EvalPoint,
    ) -> Result<InequalityReport, InequalityError> {
        if !(r > 1.0 && r.is_finite()) {
            return Err(InequalityError::Parameter(format!(
                "power-mean exponent must exceed 1, got {r}"
            )));
        }
        let d = self.discretize(alpha, t)?;
        let pts = self.check_points(t, &[&d]);
        self.require_nonnegative("x", x, &pts)?;
        self.require_nonnegative("y", y, &pts)?;
        let (xs, ys) = (d.values(x)?, d.values(y)?);
        let lhs = d.integral(|i| (xs[i] + ys[i]).powf(r))?;
        let bound = 2f64.powf(r - 1.0) * d.integral(|i| xs[i].powf(r) + ys[i].powf(r))?;
        let mut params = params(alpha, None, t);
        params.p = Some(r);
        Ok(InequalityReport::new(
            TheoremId::PowMean,
            lhs,
            bound,
            params,
            self.tolerance,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::verify_envelope;
    use std::f64::consts::{E, PI};

    fn pr(v: f64) -> PositiveReal {
        PositiveReal::new(v).unwrap()
    }

    fn tp(v: f64) -> EvalPoint {
        EvalPoint::new(v).unwrap()
    }

    fn f(src: &str) -> RealFunction {
        RealFunction::parse(src).unwrap()
    }

    fn c(v: f64) -> RealFunction {
        RealFunction::Constant(v)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn single_order_saturates_on_constants() {
        let chk = InequalityChecker::default();
        let r = chk
            .polya_szego_single(
                &c(1.0),
                &c(1.0),
                &BoundingQuadruple::constant(1.0, 1.0, 1.0, 1.0),
                pr(0.5),
                tp(E),
            )
            .unwrap();
        assert!(close(r.ratio, 1.0, 1e-12), "{r:?}");
        for &a in &[0.3, 1.0, 4.0] {
            let r = chk
                .polya_szego_single(
                    &c(2.0),
                    &c(1.0),
                    &BoundingQuadruple::constant(2.0, 2.0, 1.0, 1.0),
                    pr(a),
                    tp(7.0),
                )
                .unwrap();
            assert!(close(r.ratio, 1.0, 1e-12));
            assert!(r.pass);
        }
    }

    #[test]
    fn single_order_envelope_violation_reports_tau() {
        let chk = InequalityChecker::default();
        let env = BoundingQuadruple::constant(1.0, 1.5, 1.0, 2.0);
        let err = chk
            .polya_szego_single(&f("1 + ln(x)"), &c(1.5), &env, pr(0.5), tp(E))
            .unwrap_err();
        match err {
            InequalityError::Hypothesis { tau, .. } => {
                assert!(tau > 1.6 && tau <= E + 1e-12, "tau {tau}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn double_order_constants() {
        let chk = InequalityChecker::default();
        let env = BoundingQuadruple::constant(1.0, 1.0, 1.0, 1.0);
        let r = chk
            .polya_szego_double(&c(1.0), &c(1.0), &env, pr(1.0), pr(1.0), tp(E))
            .unwrap();
        assert!(close(r.lhs, 1.0, 1e-13) && close(r.bound, 1.0, 1e-13));
        let r = chk
            .polya_szego_double(&c(1.0), &c(1.0), &env, pr(0.5), pr(1.5), tp(10.0))
            .unwrap();
        assert!(close(r.ratio, 1.0, 1e-12));
    }

    #[test]
    fn product_bound_constants() {
        let chk = InequalityChecker::default();
        let r = chk
            .product_bound(
                &c(1.0),
                &c(1.0),
                &BoundingQuadruple::constant(1.0, 1.0, 1.0, 1.0),
                pr(0.5),
                pr(0.5),
                tp(E),
            )
            .unwrap();
        let two_over_sqrt_pi = 2.0 / PI.sqrt();
        assert!(close(r.lhs, two_over_sqrt_pi.powi(2), 1e-13));
        assert!(close(r.ratio, 1.0, 1e-12));
        let r = chk
            .product_bound(
                &c(2.0),
                &c(3.0),
                &BoundingQuadruple::constant(2.0, 2.0, 3.0, 3.0),
                pr(1.0),
                pr(1.0),
                tp(E),
            )
            .unwrap();
        assert!(close(r.lhs, 36.0, 1e-13) && close(r.bound, 36.0, 1e-13));
    }

    #[test]
    fn constant_bound_examples() {
        let chk = InequalityChecker::default();
        let cb = ConstantBounds::new(1.0, 2.0, 1.0, 3.0).unwrap();
        let r = chk
            .constant_polya_szego(&c(1.5), &c(2.0), &cb, pr(0.5), tp(E))
            .unwrap();
        assert!(close(r.lhs, 1.0, 1e-13));
        assert!(close(
            r.bound,
            0.25 * ((1.0f64 / 6.0).sqrt() + 6f64.sqrt()).powi(2),
            1e-14
        ));
        assert!((r.bound - 2.041_666_666_666_667).abs() < 1e-12);
        assert!(r.pass);

        let cb = ConstantBounds::new(1.0, 1.5, 1.5, 2.0).unwrap();
        assert!((cb.polya_szego_constant() - 1.125).abs() < 1e-14);
        let cb = ConstantBounds::new(1.0, 1.25, 1.0, 1.0).unwrap();
        assert!((cb.polya_szego_constant() - 1.0125).abs() < 1e-14);

        let tight = ConstantBounds::new(2.0, 2.0, 0.5, 0.5).unwrap();
        let r = chk
            .constant_polya_szego_two_order(&c(2.0), &c(0.5), &tight, pr(0.3), pr(1.7), tp(5.0))
            .unwrap();
        assert!(close(r.lhs, 1.0, 1e-12) && close(r.bound, 1.0, 1e-15));

        let unit = ConstantBounds::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let r = chk
            .ratio_bound_constant(&c(1.0), &c(1.0), &unit, pr(0.4), pr(2.2), tp(3.0))
            .unwrap();
        assert!(close(r.ratio, 1.0, 1e-12));
        let cb = ConstantBounds::new(2.0, 2.0, 1.0, 1.0).unwrap();
        let r = chk
            .ratio_bound_constant(&c(2.0), &c(1.0), &cb, pr(1.0), pr(1.0), tp(E))
            .unwrap();
        assert!(close(r.lhs, 4.0, 1e-13) && close(r.bound, 4.0, 1e-13));
    }

    #[test]
    fn constant_bounds_reject_exits() {
        let chk = InequalityChecker::default();
        let cb = ConstantBounds::new(1.0, 1.2, 1.0, 2.0).unwrap();
        assert!(matches!(
            chk.constant_polya_szego(&f("1 + ln(x)"), &c(1.5), &cb, pr(0.5), tp(E)),
            Err(InequalityError::Hypothesis { .. })
        ));
        assert!(ConstantBounds::new(2.0, 1.0, 1.0, 1.0).is_err());
        assert!(ConstantBounds::new(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn prefactor_identity() {
        for &(a, b, t) in &[(0.3, 1.7, 5.0), (0.5, 0.5, E), (2.0, 3.5, 1.2)] {
            let chk = InequalityChecker::default();
            let da = chk.discretize(pr(a), tp(t)).unwrap();
            let db = chk.discretize(pr(b), tp(t)).unwrap();
            let via_rule = da.integral(|_| 1.0).unwrap() * db.integral(|_| 1.0).unwrap();
            let explicit = two_order_prefactor_explicit(pr(a), pr(b), tp(t)).unwrap();
            assert!(
                ((via_rule - explicit) / explicit).abs() < 1e-12,
                "{a} {b} {t}"
            );
        }
    }

    #[test]
    fn minkowski_hand_arithmetic() {
        let chk = InequalityChecker::default();
        let r = chk
            .minkowsky_related(
                &c(1.0),
                &c(1.0),
                HolderPair::from_p(2.0).unwrap(),
                0.5,
                2.0,
                pr(1.0),
                tp(E),
            )
            .unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!((r.bound - 16.0 / 9.0).abs() < 1e-12);
        assert!(r.pass);

        let hp = HolderPair::new(3.0, 1.5).unwrap();
        let r = chk
            .minkowsky_related(&c(1.0), &c(1.0), hp, 0.9, 1.1, pr(0.5), tp(E))
            .unwrap();
        let i1 = 2.0 / PI.sqrt();
        let coef =
            4.0 * 1.1f64.powi(3) / (3.0 * 2.1f64.powi(3)) + 2f64.sqrt() / (1.5 * 1.9f64.powf(1.5));
        assert!((r.lhs - i1).abs() < 1e-12);
        assert!((r.bound - coef * 2.0 * i1).abs() < 1e-12);
        assert!(r.pass);
        assert_eq!(r.params.p, Some(3.0));
        assert_eq!(r.params.q, Some(1.5));
    }

    #[test]
    fn minkowski_ratio_hypothesis() {
        let chk = InequalityChecker::default();
        let hp = HolderPair::from_p(2.0).unwrap();
        assert!(matches!(
            chk.minkowsky_related(&c(1.0), &c(1.0), hp, 1.0, 2.0, pr(1.0), tp(E)),
            Err(InequalityError::Hypothesis { .. })
        ));
        assert!(matches!(
            chk.minkowsky_related(&c(1.0), &c(1.0), hp, 2.0, 1.0, pr(1.0), tp(E)),
            Err(InequalityError::Parameter(_))
        ));
    }

    #[test]
    fn young_and_power_mean_constants() {
        let chk = InequalityChecker::default();
        let hp = HolderPair::from_p(2.0).unwrap();
        let r = chk
            .young_pointwise_check(&c(1.0), &c(1.0), hp, pr(1.0), tp(E))
            .unwrap();
        assert!(close(r.lhs, 1.0, 1e-13) && close(r.bound, 1.0, 1e-13));
        let r = chk
            .young_pointwise_check(&c(2.0), &c(1.0), hp, pr(1.0), tp(E))
            .unwrap();
        assert!(close(r.lhs, 2.0, 1e-13) && close(r.bound, 2.5, 1e-13));

        let r = chk
            .power_mean_check(&c(1.0), &c(1.0), 2.0, pr(1.0), tp(E))
            .unwrap();
        assert!(close(r.lhs, 4.0, 1e-13) && close(r.bound, 4.0, 1e-13));
        let r = chk
            .power_mean_check(&c(1.0), &c(0.0), 2.0, pr(1.0), tp(E))
            .unwrap();
        assert!(close(r.lhs, 1.0, 1e-13) && close(r.bound, 2.0, 1e-13));
        assert_eq!(r.params.p, Some(2.0));
        assert!(chk
            .power_mean_check(&c(1.0), &c(1.0), 1.0, pr(1.0), tp(E))
            .is_err());
        assert!(matches!(
            chk.young_pointwise_check(&f("1 - ln(x)"), &c(1.0), hp, pr(1.0), tp(5.0)),
            Err(InequalityError::Hypothesis { .. })
        ));
    }

    #[test]
    fn holder_pair_validation() {
        assert!(HolderPair::new(2.0, 2.0).is_ok());
        assert!(HolderPair::new(2.0, 3.0).is_err());
        assert!(HolderPair::from_p(1.0).is_err());
        assert!((HolderPair::from_p(3.0).unwrap().q() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn envelope_examples() {
        let (lo, hi) = (c(0.5), c(2.0));
        assert!(verify_envelope(&c(1.0), &lo, &hi, tp(E), 100));
        assert!(!verify_envelope(&f("ln(x)"), &lo, &hi, tp(E), 100));
        assert!(verify_envelope(
            &f("1 + ln(x)"),
            &c(1.0),
            &c(2.0),
            tp(E),
            100
        ));
        assert!(!verify_envelope(&c(1.0), &c(0.0), &c(2.0), tp(E), 100));
        assert!(!verify_envelope(
            &f("1/(x - 2)"),
            &c(-10.0),
            &c(10.0),
            tp(3.0),
            101
        ));
    }

    #[test]
    fn tolerance_policy() {
        let tol = super::super::Tolerance::default();
        assert!(tol.accepts(1.0 + 0.5e-9, 1.0));
        assert!(!tol.accepts(1.0 + 2e-9, 1.0));
        assert!(tol.accepts(1e-13, 0.0));
        assert_eq!(tol.for_kinked().rel, 1e-7);
    }
}
