use super::DdeError;

/// Whether a discontinuity jumps between components at the same instant or
/// travels downstream through a delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscontinuityKind {
    Hard,
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discontinuity {
    pub t: f64,
    /// Lowest derivative of the solution that jumps at `t`.
    pub order: u32,
    pub kind: DiscontinuityKind,
}

/// Ordered record of known solution discontinuities. The integrator lands a
/// step endpoint on every entry inside its range.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiscontinuityLedger {
    points: Vec<Discontinuity>,
}

impl DiscontinuityLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Extends the ledger; times must be strictly increasing.
    pub fn record(
        mut self,
        t: f64,
        order: u32,
        kind: DiscontinuityKind,
    ) -> Result<Self, DdeError> {
        self.push(t, order, kind)?;
        Ok(self)
    }

    pub fn push(&mut self, t: f64, order: u32, kind: DiscontinuityKind) -> Result<(), DdeError> {
        if !t.is_finite() {
            return Err(DdeError::NonMonotoneTime {
                t,
                last: self.last_time().unwrap_or(f64::NEG_INFINITY),
            });
        }
        if let Some(last) = self.last_time() {
            if t <= last {
                return Err(DdeError::NonMonotoneTime { t, last });
            }
        }
        self.points.push(Discontinuity { t, order, kind });
        Ok(())
    }

    pub fn last_time(&self) -> Option<f64> {
        self.points.last().map(|d| d.t)
    }

    pub fn points(&self) -> &[Discontinuity] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First entry strictly after `t`.
    pub fn next_after(&self, t: f64) -> Option<&Discontinuity> {
        let idx = self.points.partition_point(|d| d.t <= t);
        self.points.get(idx)
    }

    pub(crate) fn find(&self, t: f64) -> Option<&Discontinuity> {
        self.points.iter().find(|d| d.t == t)
    }

    // Images are computed on the fly and may land out of order relative to
    // entries the caller supplied up front.
    pub(crate) fn insert_sorted(&mut self, d: Discontinuity) {
        let idx = self.points.partition_point(|p| p.t < d.t);
        if self.points.get(idx).is_some_and(|p| p.t == d.t) {
            return;
        }
        self.points.insert(idx, d);
    }
}
