use super::map::RingMap;
use super::ops::{localized_ring, map_kernel};
use super::presented::PresentedRing;
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;

/// A target variable written as `numerator / witness^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub numerator: Polynomial,
    pub power: u32,
}

/// Evidence that a ring map `A → B` is the localization `A → A_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationCertificate {
    /// `s`, an element of the source.
    pub witness: Polynomial,
    /// One entry per target variable.
    pub sections: Vec<Section>,
    /// A target element inverse to the image of `s`.
    pub inverse: Polynomial,
}

impl LocalizationCertificate {
    /// The localization at 1 for an identity map.
    pub fn trivial(ring: &PresentedRing) -> Self {
        LocalizationCertificate {
            witness: ring.one(),
            sections: (0..ring.nvars()).map(|i| Section { numerator: ring.var(i), power: 0 }).collect(),
            inverse: ring.one(),
        }
    }

    /// Checks that `A[w]/(ws − 1) → B`, `w ↦ inverse`, is an isomorphism.
    pub fn verify(&self, map: &RingMap) -> Result<()> {
        let (a, b) = (map.source(), map.target());
        let bad = |msg: String| Err(WorkbenchError::InvalidCertificate(msg));
        if self.witness.nvars() != a.nvars()
            || self.inverse.nvars() != b.nvars()
            || self.sections.len() != b.nvars()
            || self.sections.iter().any(|s| s.numerator.nvars() != a.nvars())
        {
            return bad("certificate shape does not match the map".into());
        }
        let s_img = map.apply(&self.witness);
        if !b.equal(&(&s_img * &self.inverse), &b.one()) {
            return bad(format!(
                "image of witness `{}` times `{}` is not 1",
                a.display(&self.witness),
                b.display(&self.inverse)
            ));
        }
        for (j, sec) in self.sections.iter().enumerate() {
            let expr = &map.apply(&sec.numerator) * &self.inverse.pow(sec.power);
            if !b.equal(&b.var(j), &expr) {
                return bad(format!("target variable `{}` is not the image of its section", b.vars()[j]));
            }
        }
        let (local, _) = localized_ring(a, &self.witness).map_err(|_| {
            WorkbenchError::InvalidCertificate(format!("witness `{}` is nilpotent", a.display(&self.witness)))
        })?;
        let local = std::sync::Arc::new(local);
        let mut images = map.images().to_vec();
        images.push(self.inverse.clone());
        let comparison = RingMap::new(local.clone(), b.clone(), images)?;
        let kernel = map_kernel(&comparison);
        if let Some(g) = kernel.generators().iter().find(|g| !local.is_zero(g)) {
            return bad(format!("comparison map kills `{}`", local.display(g)));
        }
        Ok(())
    }
}

/// Writes `f ∈ A_k` as `T / W^a` with `T ∈ A_0`, given sections of the `A_k` variables.
fn pull_back(
    f: &Polynomial,
    sections: &[(Polynomial, u32)],
    witness: &Polynomial,
    base: &PresentedRing,
) -> (Polynomial, u32) {
    let parts: Vec<(Polynomial, u32)> = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut p = Polynomial::constant(base.nvars(), c.clone());
            let mut r = 0;
            for (l, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    p = &p * &sections[l].0.pow(e);
                    r += sections[l].1 * e;
                }
            }
            (p, r)
        })
        .collect();
    let a = parts.iter().map(|(_, r)| *r).max().unwrap_or(0);
    let mut t = base.zero();
    for (p, r) in parts {
        t = &t + &(&p * &witness.pow(a - r));
    }
    (base.reduce(&t), a)
}

/// Certificate for the composite of a chain of certified localizations.
pub fn compose_certificates(chain: &[&RingMap]) -> Result<LocalizationCertificate> {
    let first = chain.first().ok_or_else(|| WorkbenchError::Internal("empty certificate chain".into()))?;
    let base = first.source().clone();
    let mut witness = base.one();
    let mut sections: Vec<(Polynomial, u32)> = (0..base.nvars()).map(|i| (base.var(i), 0)).collect();
    let mut inverse = base.one();

    for link in chain {
        let cert = link
            .certificate()
            .ok_or_else(|| WorkbenchError::CertificateRequired(format!("{} → {}", link.source(), link.target())))?;
        let (t, a) = pull_back(&cert.witness, &sections, &witness, &base);
        let pulled: Vec<(Polynomial, u32, u32)> = cert
            .sections
            .iter()
            .map(|s| {
                let (q, aj) = pull_back(&s.numerator, &sections, &witness, &base);
                (q, aj, s.power)
            })
            .collect();
        sections = pulled
            .into_iter()
            .map(|(q, aj, bj)| {
                let n = aj.max(bj);
                let e = aj + a * (n - bj);
                let p = &(&q * &t.pow(n - bj)) * &witness.pow((a + 1) * n - e);
                (base.reduce(&p), n)
            })
            .collect();
        let target = link.target();
        inverse = target.reduce(&(&link.apply(&inverse).pow(a + 1) * &cert.inverse));
        witness = base.reduce(&(&witness * &t));
    }

    Ok(LocalizationCertificate {
        witness,
        sections: sections.into_iter().map(|(numerator, power)| Section { numerator, power }).collect(),
        inverse,
    })
}

/// Searches for a certificate of `map` as the localization at `witness`, then verifies it.
///
/// Each target variable is rewritten as a polynomial in the source variables and the
/// inverse of the witness image, then cleared of that inverse.
pub fn find_certificate(map: &RingMap, witness: &Polynomial) -> Result<LocalizationCertificate> {
    let (a, b) = (map.source(), map.target());
    let witness = a.reduce(witness);
    let inverse = b.inverse(&map.apply(&witness)).ok_or_else(|| {
        WorkbenchError::InvalidCertificate(format!("image of `{}` is not a unit in {}", a.display(&witness), b))
    })?;
    let (m, n) = (b.nvars(), a.nvars());
    // ambient: target vars, then source vars, then w
    let total = m + n + 1;
    let tgt: Vec<usize> = (0..m).collect();
    let mut gens: Vec<Polynomial> = b.relations().iter().map(|p| p.embed(total, &tgt)).collect();
    for i in 0..n {
        gens.push(&Polynomial::var(total, m + i) - &map.images()[i].embed(total, &tgt));
    }
    gens.push(&Polynomial::var(total, m + n) - &inverse.embed(total, &tgt));
    let gb = crate::polyalg::GroebnerBasis::compute(total, &gens, crate::polyalg::TermOrder::Block(m));
    let src: Vec<usize> = (m..total).collect();
    let mut sections = Vec::with_capacity(m);
    for j in 0..m {
        let nf = gb.reduce(&Polynomial::var(total, j)).restrict_to(&src).ok_or_else(|| {
            WorkbenchError::InvalidCertificate(format!(
                "target variable `{}` is not in the image of the localization at `{}`",
                b.vars()[j],
                a.display(&witness)
            ))
        })?;
        // nf is a polynomial in (x, w); clear w against the witness
        let k = nf.terms().iter().map(|(mo, _)| mo.exponents()[n]).max().unwrap_or(0);
        let keep: Vec<usize> = (0..n).collect();
        let mut num = a.zero();
        for (mo, c) in nf.terms() {
            let e = mo.exponents()[n];
            let mut xs = mo.exponents().to_vec();
            xs[n] = 0;
            let term = Polynomial::monomial(crate::polyalg::Monomial::from_exponents(xs), c.clone())
                .restrict_to(&keep)
                .expect("w exponent cleared");
            num = &num + &(&term * &witness.pow(k - e));
        }
        sections.push(Section { numerator: a.reduce(&num), power: k });
    }
    let cert = LocalizationCertificate { witness, sections, inverse };
    cert.verify(map)?;
    Ok(cert)
}
