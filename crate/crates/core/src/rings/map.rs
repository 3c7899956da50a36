use std::fmt;
use std::sync::Arc;

use super::certificate::LocalizationCertificate;
use super::presented::PresentedRing;
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;

/// A ℚ-algebra map given by the images of the source variables.
#[derive(Clone)]
pub struct RingMap {
    source: Arc<PresentedRing>,
    target: Arc<PresentedRing>,
    images: Vec<Polynomial>,
    certificate: Option<LocalizationCertificate>,
    assumed: bool,
}

impl RingMap {
    /// Checks that every source relation maps to zero.
    pub fn new(source: Arc<PresentedRing>, target: Arc<PresentedRing>, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(WorkbenchError::InvalidRingMap(format!(
                "{} images given for {} source variables",
                images.len(),
                source.nvars()
            )));
        }
        if images.iter().any(|p| p.nvars() != target.nvars()) {
            return Err(WorkbenchError::InvalidRingMap("image ambient mismatch".into()));
        }
        let images: Vec<Polynomial> = images.iter().map(|p| target.reduce(p)).collect();
        for rel in source.relations() {
            let img = rel.substitute(&images, target.nvars());
            if !target.is_zero(&img) {
                return Err(WorkbenchError::InvalidRingMap(format!(
                    "relation `{}` maps to `{}` ≠ 0 in {}",
                    source.display(rel),
                    target.display(&target.reduce(&img)),
                    target
                )));
            }
        }
        Ok(RingMap { source, target, images, certificate: None, assumed: false })
    }

    /// The identity, certified as the localization at 1.
    pub fn identity(ring: Arc<PresentedRing>) -> Self {
        let images: Vec<Polynomial> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        let cert = LocalizationCertificate::trivial(&ring);
        RingMap { source: ring.clone(), target: ring, images, certificate: Some(cert), assumed: false }
    }

    /// Attaches a certificate after verifying it.
    pub fn certified(mut self, cert: LocalizationCertificate) -> Result<Self> {
        cert.verify(&self)?;
        self.certificate = Some(cert);
        Ok(self)
    }

    /// Attaches a certificate without re-verification (for certificates built by construction).
    pub(crate) fn with_certificate_unchecked(mut self, cert: LocalizationCertificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    /// Marks the map as a user-asserted flat epimorphism.
    pub fn assumed(mut self) -> Self {
        self.assumed = true;
        self
    }

    pub fn source(&self) -> &Arc<PresentedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedRing> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn certificate(&self) -> Option<&LocalizationCertificate> {
        self.certificate.as_ref()
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.is_some()
    }

    pub fn is_assumed(&self) -> bool {
        self.assumed
    }

    /// Image of a source polynomial, reduced in the target.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.target.reduce(&f.substitute(&self.images, self.target.nvars()))
    }

    /// `next ∘ self`, uncertified.
    pub fn then(&self, next: &RingMap) -> Result<RingMap> {
        if !self.target.same_presentation(&next.source) {
            return Err(WorkbenchError::InvalidRingMap(format!(
                "cannot compose: {} is not {}",
                self.target, next.source
            )));
        }
        let images = self.images.iter().map(|p| next.apply(p)).collect();
        Ok(RingMap {
            source: self.source.clone(),
            target: next.target.clone(),
            images,
            certificate: None,
            assumed: self.assumed || next.assumed,
        })
    }

    /// Element-wise equality of two maps with the same source and target.
    pub fn same_map(&self, other: &RingMap) -> bool {
        self.source.same_presentation(&other.source)
            && self.target.same_presentation(&other.target)
            && self.images.iter().zip(&other.images).all(|(a, b)| self.target.equal(a, b))
    }

    /// `x ↦ image` lines for reports.
    pub fn describe(&self) -> String {
        self.source
            .vars()
            .iter()
            .zip(&self.images)
            .map(|(v, p)| format!("{v} ↦ {}", self.target.display(p)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {} [{}]", self.source, self.target, self.describe())
    }
}

/// Composite of a nonempty chain, certified when every link is.
pub fn compose_chain(chain: &[&RingMap]) -> Result<RingMap> {
    let (first, rest) = chain.split_first().ok_or_else(|| WorkbenchError::Internal("empty ring map chain".into()))?;
    let mut acc = (*first).clone();
    acc.certificate = None;
    for m in rest {
        acc = acc.then(m)?;
    }
    if chain.iter().all(|m| m.is_certified()) {
        let cert = super::certificate::compose_certificates(chain)?;
        acc.certificate = Some(cert);
    }
    Ok(acc)
}

impl RingMap {
    /// A map certified as the localization at `witness`, with the certificate found automatically.
    pub fn localization(
        source: Arc<PresentedRing>,
        target: Arc<PresentedRing>,
        images: Vec<Polynomial>,
        witness: &Polynomial,
    ) -> Result<Self> {
        let map = RingMap::new(source, target, images)?;
        let cert = super::certificate::find_certificate(&map, witness)?;
        Ok(map.with_certificate_unchecked(cert))
    }
}
