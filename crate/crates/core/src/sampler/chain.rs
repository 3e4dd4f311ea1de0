use rand::Rng;

use super::{stream_rng, SamplerConfig, SamplerRng};
use crate::error::{Error, Result};
use crate::model::{Host, LabeledMatching};
use crate::switching::SwitchTriple;

/// A proposal of the switch chain. Both kinds are proposed with probability
/// 1/2 and each has an inverse proposed with equal probability, so the
/// uniform distribution is stationary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMove {
    /// The three-edge rotation; undone by `(x, z, y)`.
    Rotation(SwitchTriple),
    /// Replace `xP(x), yP(y)` by `xP(y), yP(x)`; its own inverse. Needed
    /// because hosts with four vertices admit no rotation.
    Swap(usize, usize),
}

/// Applies `mv` to `state` in place when the result is a perfect matching
/// of `host`; otherwise leaves it unchanged. Returns whether it moved.
pub fn apply_move<H: Host + ?Sized>(host: &H, state: &mut LabeledMatching, mv: ChainMove) -> bool {
    match mv {
        ChainMove::Rotation(t) => {
            let (px, py, pz) = (state.mate(t.x), state.mate(t.y), state.mate(t.z));
            let six = [t.x, t.y, t.z, px, py, pz];
            let distinct = (0..6).all(|i| (i + 1..6).all(|j| six[i] != six[j]));
            if distinct && host.adjacent(t.x, py) && host.adjacent(t.y, pz) && host.adjacent(t.z, px) {
                state.set_pair(t.x, py);
                state.set_pair(t.y, pz);
                state.set_pair(t.z, px);
                true
            } else {
                false
            }
        }
        ChainMove::Swap(x, y) => {
            let (px, py) = (state.mate(x), state.mate(y));
            if x != y && px != y && host.adjacent(x, py) && host.adjacent(y, px) {
                state.set_pair(x, py);
                state.set_pair(y, px);
                true
            } else {
                false
            }
        }
    }
}

/// A single chain over the perfect matchings of a host.
pub struct SwitchChain<'a, H: Host + ?Sized> {
    host: &'a H,
    state: LabeledMatching,
    rng: SamplerRng,
}

impl<'a, H: Host + ?Sized> SwitchChain<'a, H> {
    pub fn new(host: &'a H, start: LabeledMatching, rng: SamplerRng) -> Result<Self> {
        if start.vertex_count() != host.vertex_count() {
            return Err(Error::MismatchedVertexSets(start.vertex_count(), host.vertex_count()));
        }
        if !start.is_perfect() {
            return Err(Error::NotPerfect);
        }
        if let Some((u, v)) = start.pairs().find(|&(u, v)| !host.adjacent(u, v)) {
            return Err(Error::NotAnEdge(u, v));
        }
        Ok(Self { host, state: start, rng })
    }

    pub fn state(&self) -> &LabeledMatching {
        &self.state
    }

    fn propose(&mut self) -> Option<ChainMove> {
        let n = self.host.vertex_count();
        if self.rng.random_bool(0.5) {
            if n < 3 {
                return None;
            }
            let x = self.rng.random_range(0..n);
            let y = self.rng.random_range(0..n);
            let z = self.rng.random_range(0..n);
            SwitchTriple::new(x, y, z).ok().map(ChainMove::Rotation)
        } else {
            if n < 2 {
                return None;
            }
            let x = self.rng.random_range(0..n);
            let y = self.rng.random_range(0..n);
            Some(ChainMove::Swap(x, y))
        }
    }

    /// One step; returns whether the state changed.
    pub fn step(&mut self) -> bool {
        match self.propose() {
            Some(mv) => apply_move(self.host, &mut self.state, mv),
            None => false,
        }
    }
}

/// Runs the chain from `start`: `burn_in` steps, then one emitted state
/// every `step_count` steps until `sample_count` states are collected.
pub fn mcmc_switch_chain<H: Host + ?Sized>(host: &H, start: &LabeledMatching, cfg: &SamplerConfig) -> Result<Vec<LabeledMatching>> {
    cfg.validate()?;
    let mut chain = SwitchChain::new(host, start.clone(), stream_rng(cfg.seed, 0))?;
    for _ in 0..cfg.burn_in {
        chain.step();
    }
    let mut out = Vec::with_capacity(cfg.sample_count);
    for _ in 0..cfg.sample_count {
        for _ in 0..cfg.step_count {
            chain.step();
        }
        out.push(chain.state.clone());
    }
    Ok(out)
}
