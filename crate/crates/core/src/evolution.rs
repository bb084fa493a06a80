//! Genetic search over partition chromosomes.
//!
//! Fitness is the resubstitution recognition rate of the nearest-prototype
//! classifier induced by a chromosome. Fitness draws no randomness, so the
//! population is scored in parallel while selection and variation consume a
//! single seeded stream sequentially; a run is a pure function of its inputs.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classifier::{build_models, classify};
use crate::error::{Error, Result};
use crate::imaging::{LabeledSet, NormImage, Rect};
use crate::partitions::{random_chromosome, region_span, Axis, Chromosome, CutBounds, FuzzyParams, PartitionPlan};
use crate::Label;

#[derive(Debug, Clone, PartialEq)]
pub struct GAConfig {
    pub population_size: usize,
    pub max_generations: usize,
    /// Stop after this many generations without a best-fitness improvement;
    /// 0 disables the check.
    pub stall_generations: usize,
    pub tournament_size: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub elite_count: usize,
    pub cut_bounds: CutBounds,
    pub seed: u64,
}

impl Default for GAConfig {
    fn default() -> Self {
        Self {
            population_size: 50,
            max_generations: 100,
            stall_generations: 20,
            tournament_size: 3,
            crossover_prob: 0.8,
            mutation_prob: 0.1,
            elite_count: 2,
            cut_bounds: CutBounds::default(),
            seed: 0,
        }
    }
}

impl GAConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size < 2 {
            return fail(format!("population_size {} < 2", self.population_size));
        }
        if self.elite_count >= self.population_size {
            return fail(format!("elite_count {} must be below population_size", self.elite_count));
        }
        if self.tournament_size < 1 {
            return fail("tournament_size must be at least 1".into());
        }
        for (name, p) in [("crossover_prob", self.crossover_prob), ("mutation_prob", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} {p} outside [0, 1]"));
            }
        }
        CutBounds::new(self.cut_bounds.min_cuts, self.cut_bounds.max_cuts)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    /// Best fitness seen so far, this generation included.
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best: Chromosome,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvolutionTrace {
    pub generations: Vec<GenerationStats>,
}

impl EvolutionTrace {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("generation\tbest_fitness\tmean_fitness\n");
        for g in &self.generations {
            writeln!(out, "{}\t{}\t{}", g.generation, g.best_fitness, g.mean_fitness).unwrap();
        }
        out
    }

    pub fn best_fitness(&self) -> Option<f64> {
        self.generations.last().map(|g| g.best_fitness)
    }
}

/// Scores chromosomes against a fixed sample subset.
pub struct FitnessEvaluator<'a> {
    samples: Vec<(&'a NormImage, Label)>,
    allowed: Vec<Label>,
    fp: FuzzyParams,
}

impl<'a> FitnessEvaluator<'a> {
    pub fn new(data: &'a LabeledSet, fp: FuzzyParams, allowed: &[Label]) -> Result<Self> {
        let allowed: Vec<Label> = allowed.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if allowed.is_empty() {
            return Err(Error::EmptyAllowedSet);
        }
        let samples: Vec<_> =
            data.items().iter().filter(|(_, l)| allowed.binary_search(l).is_ok()).map(|(img, l)| (img, *l)).collect();
        for &label in &allowed {
            if !samples.iter().any(|(_, l)| *l == label) {
                return Err(Error::NoSamplesForClass(label));
            }
        }
        Ok(Self { samples, allowed, fp })
    }

    pub fn allowed(&self) -> &[Label] {
        &self.allowed
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn evaluate(&self, ch: &Chromosome) -> Result<f64> {
        let plan = PartitionPlan::new(ch, self.fp)?;
        let features: Vec<_> = self.samples.iter().map(|(img, _)| plan.extract(img)).collect();
        let models = build_models(features.iter().zip(self.samples.iter().map(|(_, l)| *l)), ch, self.fp)?;
        let mut correct = 0usize;
        for (fv, (_, truth)) in features.iter().zip(&self.samples) {
            if classify(fv, &models, &self.allowed)?.label == *truth {
                correct += 1;
            }
        }
        Ok(correct as f64 / self.samples.len() as f64)
    }
}

/// Fraction of samples of the allowed classes recognized by the prototypes
/// built from those same samples.
pub fn fitness(ch: &Chromosome, data: &LabeledSet, fp: FuzzyParams, allowed: &[Label]) -> Result<f64> {
    FitnessEvaluator::new(data, fp, allowed)?.evaluate(ch)
}

/// Sort, dedupe, pin endpoints, then delete or insert random interior cuts
/// until the count is within bounds.
fn repair<R: Rng + ?Sized>(cuts: &mut Vec<usize>, lo: usize, hi: usize, bounds: CutBounds, rng: &mut R) {
    cuts.retain(|&c| c > lo && c < hi);
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_unstable();
    cuts.dedup();
    while cuts.len() > bounds.max_cuts && cuts.len() > 2 {
        let i = rng.gen_range(1..cuts.len() - 1);
        cuts.remove(i);
    }
    let min = bounds.min_cuts.min(hi - lo + 1);
    while cuts.len() < min {
        let free: Vec<usize> = (lo + 1..hi).filter(|c| cuts.binary_search(c).is_err()).collect();
        let c = *free.choose(rng).expect("span holds min_cuts coordinates");
        let at = cuts.binary_search(&c).unwrap_err();
        cuts.insert(at, c);
    }
}

fn splice(a: &[usize], b: &[usize], split: usize) -> Vec<usize> {
    a.iter().copied().filter(|&c| c < split).chain(b.iter().copied().filter(|&c| c >= split)).collect()
}

/// Coordinate-split crossover with fixed split points per part.
pub fn crossover_at<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    split_h: usize,
    split_v: usize,
    bounds: CutBounds,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome)> {
    if a.region != b.region {
        return Err(Error::RegionMismatch);
    }
    let mut c1 = Chromosome::new(a.region, Vec::new(), Vec::new());
    let mut c2 = c1.clone();
    for (axis, split) in [(Axis::Horizontal, split_h), (Axis::Vertical, split_v)] {
        let (lo, hi) = a.span(axis);
        let mut x = splice(a.cuts(axis), b.cuts(axis), split);
        let mut y = splice(b.cuts(axis), a.cuts(axis), split);
        repair(&mut x, lo, hi, bounds, rng);
        repair(&mut y, lo, hi, bounds, rng);
        *c1.cuts_mut(axis) = x;
        *c2.cuts_mut(axis) = y;
    }
    Ok((c1, c2))
}

/// Crossover with split coordinates drawn uniformly over each part's span.
pub fn crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    bounds: CutBounds,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome)> {
    if a.region != b.region {
        return Err(Error::RegionMismatch);
    }
    let (ht, hb) = region_span(a.region, Axis::Horizontal);
    let (vl, vr) = region_span(a.region, Axis::Vertical);
    let split_h = rng.gen_range(ht..=hb);
    let split_v = rng.gen_range(vl..=vr);
    crossover_at(a, b, split_h, split_v, bounds, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    Shift,
    Insert,
    Delete,
}

fn shift_options(cuts: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..cuts.len().saturating_sub(1) {
        for d in 1..=3usize {
            if cuts[i] >= d && cuts[i] - d > cuts[i - 1] {
                out.push((i, cuts[i] - d));
            }
            if cuts[i] + d < cuts[i + 1] {
                out.push((i, cuts[i] + d));
            }
        }
    }
    out
}

fn free_interior(cuts: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    (lo + 1..hi).filter(|c| cuts.binary_search(c).is_err()).collect()
}

fn move_legal(ch: &Chromosome, axis: Axis, kind: MoveKind, bounds: CutBounds) -> bool {
    let cuts = ch.cuts(axis);
    let (lo, hi) = ch.span(axis);
    match kind {
        MoveKind::Shift => !shift_options(cuts).is_empty(),
        MoveKind::Insert => cuts.len() < bounds.max_cuts && !free_interior(cuts, lo, hi).is_empty(),
        MoveKind::Delete => cuts.len() > bounds.min_cuts && cuts.len() > 2,
    }
}

/// Move kinds applicable to `ch` under `bounds`, on at least one part.
pub fn legal_moves(ch: &Chromosome, bounds: CutBounds) -> Vec<MoveKind> {
    [MoveKind::Shift, MoveKind::Insert, MoveKind::Delete]
        .into_iter()
        .filter(|&k| [Axis::Horizontal, Axis::Vertical].iter().any(|&a| move_legal(ch, a, k, bounds)))
        .collect()
}

/// Applies one shift, insert or delete move, chosen uniformly among the legal
/// kinds, then uniformly over the parts and positions where it applies.
pub fn mutate<R: Rng + ?Sized>(ch: &Chromosome, rng: &mut R, bounds: CutBounds) -> Chromosome {
    mutate_traced(ch, rng, bounds).0
}

pub fn mutate_traced<R: Rng + ?Sized>(
    ch: &Chromosome,
    rng: &mut R,
    bounds: CutBounds,
) -> (Chromosome, Option<MoveKind>) {
    let kinds = legal_moves(ch, bounds);
    let Some(&kind) = kinds.choose(rng) else {
        return (ch.clone(), None);
    };
    let axes: Vec<Axis> =
        [Axis::Horizontal, Axis::Vertical].into_iter().filter(|&a| move_legal(ch, a, kind, bounds)).collect();
    let axis = *axes.choose(rng).expect("kind is legal on some axis");
    let mut out = ch.clone();
    let (lo, hi) = ch.span(axis);
    let cuts = out.cuts_mut(axis);
    match kind {
        MoveKind::Shift => {
            let &(i, to) = shift_options(cuts).choose(rng).expect("legal shift");
            cuts[i] = to;
        }
        MoveKind::Insert => {
            let &c = free_interior(cuts, lo, hi).choose(rng).expect("free coordinate");
            let at = cuts.binary_search(&c).unwrap_err();
            cuts.insert(at, c);
        }
        MoveKind::Delete => {
            let i = rng.gen_range(1..cuts.len() - 1);
            cuts.remove(i);
        }
    }
    (out, Some(kind))
}

fn tournament<R: Rng + ?Sized>(pop: &[Individual], size: usize, rng: &mut R) -> usize {
    let mut best = rng.gen_range(0..pop.len());
    for _ in 1..size {
        let i = rng.gen_range(0..pop.len());
        if pop[i].fitness > pop[best].fitness {
            best = i;
        }
    }
    best
}

fn score(
    chromosomes: Vec<Chromosome>,
    eval: &FitnessEvaluator<'_>,
    cache: &mut HashMap<Chromosome, f64>,
) -> Result<Vec<Individual>> {
    let mut fresh: Vec<&Chromosome> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, ch) in chromosomes.iter().enumerate() {
        if !cache.contains_key(ch) && seen.insert(ch.to_string()) {
            fresh.push(&chromosomes[i]);
        }
    }
    let scored: Vec<f64> = fresh.par_iter().map(|ch| eval.evaluate(ch)).collect::<Result<_>>()?;
    for (ch, f) in fresh.into_iter().zip(scored) {
        cache.insert(ch.clone(), f);
    }
    Ok(chromosomes
        .into_iter()
        .map(|ch| {
            let fitness = cache[&ch];
            Individual { chromosome: ch, fitness }
        })
        .collect())
}

/// Runs the generational loop and returns the best chromosome ever seen.
pub fn evolve(
    data: &LabeledSet,
    region: Rect,
    cfg: &GAConfig,
    fp: FuzzyParams,
    allowed: &[Label],
) -> Result<(Chromosome, EvolutionTrace)> {
    evolve_observed(data, region, cfg, fp, allowed, |_, _| {})
}

/// [`evolve`], calling `observer(generation, population)` after each
/// generation is scored (generation 0 is the initial population).
pub fn evolve_observed(
    data: &LabeledSet,
    region: Rect,
    cfg: &GAConfig,
    fp: FuzzyParams,
    allowed: &[Label],
    mut observer: impl FnMut(usize, &[Individual]),
) -> Result<(Chromosome, EvolutionTrace)> {
    cfg.validate()?;
    let eval = FitnessEvaluator::new(data, fp, allowed)?;
    let bounds = cfg.cut_bounds;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cache = HashMap::new();

    let initial =
        (0..cfg.population_size).map(|_| random_chromosome(region, bounds, &mut rng)).collect::<Result<Vec<_>>>()?;
    let mut pop = score(initial, &eval, &mut cache)?;

    let mut best = pop[0].clone();
    let mut trace = EvolutionTrace::default();
    let mut record = |gen: usize, pop: &[Individual], best: &mut Individual| -> bool {
        let mut improved = false;
        for ind in pop {
            if ind.fitness > best.fitness {
                *best = ind.clone();
                improved = true;
            }
        }
        let mean = pop.iter().map(|i| i.fitness).sum::<f64>() / pop.len() as f64;
        trace.generations.push(GenerationStats {
            generation: gen,
            best_fitness: best.fitness,
            mean_fitness: mean,
            best: best.chromosome.clone(),
        });
        improved
    };
    record(0, &pop, &mut best);
    observer(0, &pop);

    let mut stall = 0;
    for gen in 1..=cfg.max_generations {
        if cfg.stall_generations > 0 && stall >= cfg.stall_generations {
            break;
        }
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| pop[b].fitness.total_cmp(&pop[a].fitness));
        let mut next: Vec<Chromosome> =
            order.iter().take(cfg.elite_count).map(|&i| pop[i].chromosome.clone()).collect();

        while next.len() < cfg.population_size {
            let p1 = &pop[tournament(&pop, cfg.tournament_size, &mut rng)].chromosome;
            let p2 = &pop[tournament(&pop, cfg.tournament_size, &mut rng)].chromosome;
            let (mut c1, mut c2) = if rng.gen::<f64>() < cfg.crossover_prob {
                crossover(p1, p2, bounds, &mut rng)?
            } else {
                (p1.clone(), p2.clone())
            };
            for child in [&mut c1, &mut c2] {
                if rng.gen::<f64>() < cfg.mutation_prob {
                    *child = mutate(child, &mut rng, bounds);
                }
            }
            next.push(c1);
            if next.len() < cfg.population_size {
                next.push(c2);
            }
        }

        pop = score(next, &eval, &mut cache)?;
        if record(gen, &pop, &mut best) {
            stall = 0;
        } else {
            stall += 1;
        }
        observer(gen, &pop);
    }
    Ok((best.chromosome, trace))
}
