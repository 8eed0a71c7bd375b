use crate::numerics::ComplexSample;

/// Processing-engine controller of one output: a pair of dual-port stores
/// of equal depth. One acts as the real-time register (RTR) receiving the
/// group header's multicast, the other as the prefetch buffer (PB) being
/// filled for the next scenario; roles swap at every scenario boundary.
///
/// Both stores are addressed by header time `t mod depth`.
#[derive(Clone, Debug)]
pub struct Pec {
    stores: [Vec<ComplexSample>; 2],
    rtr: usize,
}

impl Pec {
    pub fn new(depth: u32) -> Self {
        let store = vec![ComplexSample::ZERO; depth as usize];
        Self { stores: [store.clone(), store], rtr: 0 }
    }

    pub fn depth(&self) -> usize {
        self.stores[0].len()
    }

    fn slot(&self, t: i64) -> usize {
        t.rem_euclid(self.depth() as i64) as usize
    }

    pub fn rtr_write(&mut self, t: i64, x: ComplexSample) {
        let s = self.slot(t);
        self.stores[self.rtr][s] = x;
    }

    pub fn rtr_read(&self, t: i64) -> ComplexSample {
        self.stores[self.rtr][self.slot(t)]
    }

    pub fn pb_write(&mut self, t: i64, x: ComplexSample) {
        let s = self.slot(t);
        self.stores[1 - self.rtr][s] = x;
    }

    pub fn clear_pb(&mut self) {
        self.stores[1 - self.rtr].fill(ComplexSample::ZERO);
    }

    /// Boundary role exchange: the filled PB becomes readable history.
    pub fn swap(&mut self) {
        self.rtr = 1 - self.rtr;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> ComplexSample {
        ComplexSample::from_real(x)
    }

    #[test]
    fn offset_zero_reads_latest_write() {
        let mut p = Pec::new(8);
        p.rtr_write(5, s(3.0));
        assert_eq!(p.rtr_read(5), s(3.0));
    }

    #[test]
    fn prefetched_history_appears_after_swap() {
        let mut p = Pec::new(16);
        for t in 90..100 {
            p.rtr_write(t, s(t as f64));
            p.pb_write(t, s(-(t as f64)));
        }
        assert_eq!(p.rtr_read(95), s(95.0));
        p.swap();
        assert_eq!(p.rtr_read(95), s(-95.0));
        p.clear_pb();
        p.swap();
        assert!(p.rtr_read(95).is_zero());
    }
}
