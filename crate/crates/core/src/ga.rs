//! Real-coded genetic algorithm over initial weights and thresholds, and
//! the GA-then-Levenberg-Marquardt training pipeline.
//!
//! A chromosome is the network's parameter vector in canonical order (see
//! [`crate::net`]). Fitness is `1 / (1 + J)` with `J` the summed squared
//! error, so it lies in `(0, 1]` and is usable as a roulette weight.
//!
//! Random draws happen in a fixed order: the initial population member by
//! member and gene by gene; then per offspring pair two roulette draws,
//! the crossover draws, and the mutation draws for each child in turn.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::net::{uniform_vec, NetworkTopology, NetworkWeights};
use crate::scalar::Scalar;
use crate::train::{total_error, train_lm, LmConfig, Termination, TrainLog, TrainingPattern};

#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome<T> {
    pub genes: Vec<T>,
    /// Cached fitness, set once the chromosome has been evaluated.
    pub fitness: Option<T>,
}

impl<T: Scalar> Chromosome<T> {
    pub fn new(genes: Vec<T>) -> Self {
        Self {
            genes,
            fitness: None,
        }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    fn fitness_or_zero(&self) -> T {
        self.fitness.unwrap_or_else(T::zero)
    }
}

pub fn encode<T: Scalar>(weights: &NetworkWeights<T>) -> Chromosome<T> {
    Chromosome::new(weights.params().to_vec())
}

pub fn decode<T: Scalar>(
    chromosome: &Chromosome<T>,
    topology: &NetworkTopology,
) -> Result<NetworkWeights<T>> {
    NetworkWeights::from_flat(topology, chromosome.genes.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverKind {
    OnePoint,
    Arithmetic,
}

impl FromStr for CrossoverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-point" => Ok(Self::OnePoint),
            "arithmetic" => Ok(Self::Arithmetic),
            other => Err(Error::invalid("crossover kind", other.to_string())),
        }
    }
}

impl fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OnePoint => "one-point",
            Self::Arithmetic => "arithmetic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    Gaussian,
    Uniform,
}

impl FromStr for MutationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "uniform" => Ok(Self::Uniform),
            other => Err(Error::invalid("mutation kind", other.to_string())),
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gaussian => "gaussian",
            Self::Uniform => "uniform",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig<T> {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    /// Per-gene mutation probability.
    pub mutation_prob: f64,
    /// Range for the initial population and for uniform mutation.
    pub gene_range: (T, T),
    pub crossover_kind: CrossoverKind,
    pub mutation_kind: MutationKind,
    pub gaussian_sigma: T,
    /// Best members copied unchanged into the next generation.
    pub elitism: usize,
    /// Evaluate fitness on this many evenly spaced patterns; `None` uses all.
    pub fitness_patterns: Option<usize>,
}

impl<T: Scalar> Default for GaConfig<T> {
    fn default() -> Self {
        Self {
            population_size: 50,
            generations: 100,
            crossover_prob: 0.8,
            mutation_prob: 0.05,
            gene_range: (-T::one(), T::one()),
            crossover_kind: CrossoverKind::Arithmetic,
            mutation_kind: MutationKind::Gaussian,
            gaussian_sigma: T::of(0.1),
            elitism: 1,
            fitness_patterns: None,
        }
    }
}

impl<T: Scalar> GaConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return Err(Error::invalid(
                "population size",
                format!("must be an even number >= 2, got {}", self.population_size),
            ));
        }
        for (what, p) in [
            ("crossover probability", self.crossover_prob),
            ("mutation probability", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(what, format!("{p} is outside [0, 1]")));
            }
        }
        let (lo, hi) = self.gene_range;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(
                "gene range",
                format!("need lo < hi, got [{lo}, {hi}]"),
            ));
        }
        if !(self.gaussian_sigma > T::zero()) || !self.gaussian_sigma.is_finite() {
            return Err(Error::invalid("gaussian sigma", "must be positive"));
        }
        if self.elitism > self.population_size {
            return Err(Error::invalid("elitism", "exceeds population size"));
        }
        if self.fitness_patterns == Some(0) {
            return Err(Error::invalid("fitness patterns", "must be at least 1"));
        }
        Ok(())
    }
}

/// `1 / (1 + J)` of the decoded network over `patterns`; 0 if the network
/// produces a non-finite error.
pub fn fitness<T: Scalar>(
    chromosome: &Chromosome<T>,
    topology: &NetworkTopology,
    patterns: &[TrainingPattern<T>],
) -> Result<T> {
    Ok(evaluate_one(chromosome, topology, patterns)?.0)
}

fn evaluate_one<T: Scalar>(
    chromosome: &Chromosome<T>,
    topology: &NetworkTopology,
    patterns: &[TrainingPattern<T>],
) -> Result<(T, T)> {
    let net = decode(chromosome, topology)?;
    let error = total_error(&net, patterns)?;
    if error.is_finite() {
        Ok((T::one() / (T::one() + error), error))
    } else {
        Ok((T::zero(), T::infinity()))
    }
}

/// Fitness-proportional selection with one uniform draw against the
/// cumulative distribution. If every fitness is zero the pick is uniform.
pub fn roulette_select<T: Scalar, R: Rng + ?Sized>(fitnesses: &[T], rng: &mut R) -> usize {
    assert!(!fitnesses.is_empty(), "roulette over an empty population");
    let total: f64 = fitnesses.iter().map(|f| f.as_f64().max(0.0)).sum();
    if !(total > 0.0) || !total.is_finite() {
        return rng.random_range(0..fitnesses.len());
    }
    let spin = rng.random::<f64>() * total;
    let mut cumulative = 0.0;
    for (i, f) in fitnesses.iter().enumerate() {
        cumulative += f.as_f64().max(0.0);
        if cumulative > spin {
            return i;
        }
    }
    // Rounding left spin at the very top; return the last live member.
    fitnesses
        .iter()
        .rposition(|f| f.as_f64() > 0.0)
        .expect("total > 0 implies a positive fitness")
}

/// Recombines two parents. With probability `1 - crossover_prob` the
/// children are plain copies.
pub fn crossover<T: Scalar, R: Rng + ?Sized>(
    parent_a: &Chromosome<T>,
    parent_b: &Chromosome<T>,
    config: &GaConfig<T>,
    rng: &mut R,
) -> Result<(Chromosome<T>, Chromosome<T>)> {
    if parent_a.len() != parent_b.len() {
        return Err(Error::shape(
            "crossover parents",
            parent_a.len(),
            parent_b.len(),
        ));
    }
    let copies = || {
        (
            Chromosome::new(parent_a.genes.clone()),
            Chromosome::new(parent_b.genes.clone()),
        )
    };
    if rng.random::<f64>() >= config.crossover_prob {
        return Ok(copies());
    }
    Ok(match config.crossover_kind {
        CrossoverKind::OnePoint => {
            if parent_a.len() < 2 {
                return Ok(copies());
            }
            let cut = rng.random_range(1..parent_a.len());
            one_point(parent_a, parent_b, cut)
        }
        CrossoverKind::Arithmetic => {
            let lambda = T::of(rng.random::<f64>());
            arithmetic(parent_a, parent_b, lambda)
        }
    })
}

/// Children take the prefix `[..cut)` from one parent and the suffix from the other.
pub fn one_point<T: Scalar>(
    a: &Chromosome<T>,
    b: &Chromosome<T>,
    cut: usize,
) -> (Chromosome<T>, Chromosome<T>) {
    let child = |head: &[T], tail: &[T]| {
        Chromosome::new(head[..cut].iter().chain(&tail[cut..]).copied().collect())
    };
    (child(&a.genes, &b.genes), child(&b.genes, &a.genes))
}

/// `λa + (1-λ)b` and `(1-λ)a + λb`.
pub fn arithmetic<T: Scalar>(
    a: &Chromosome<T>,
    b: &Chromosome<T>,
    lambda: T,
) -> (Chromosome<T>, Chromosome<T>) {
    let rest = T::one() - lambda;
    let (first, second) = a
        .genes
        .iter()
        .zip(&b.genes)
        .map(|(&x, &y)| (lambda * x + rest * y, rest * x + lambda * y))
        .unzip();
    (Chromosome::new(first), Chromosome::new(second))
}

/// Mutates each gene independently with probability `mutation_prob`.
pub fn mutate<T: Scalar, R: Rng + ?Sized>(
    chromosome: Chromosome<T>,
    config: &GaConfig<T>,
    rng: &mut R,
) -> Chromosome<T> {
    let sigma = config.gaussian_sigma.as_f64();
    let normal = Normal::new(0.0, sigma).expect("validated sigma");
    let (lo, hi) = (config.gene_range.0.as_f64(), config.gene_range.1.as_f64());
    let mut changed = false;
    let mut genes = chromosome.genes;
    for gene in genes.iter_mut() {
        if rng.random::<f64>() >= config.mutation_prob {
            continue;
        }
        changed = true;
        *gene = match config.mutation_kind {
            MutationKind::Gaussian => *gene + T::of(normal.sample(rng)),
            MutationKind::Uniform => T::of(lo + (hi - lo) * rng.random::<f64>()),
        };
    }
    Chromosome {
        genes,
        fitness: if changed { None } else { chromosome.fitness },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population<T> {
    pub members: Vec<Chromosome<T>>,
    pub generation: usize,
    pub best_ever: Chromosome<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaLogRow {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_error: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaLog {
    pub rows: Vec<GaLogRow>,
}

impl GaLog {
    pub const CSV_HEADER: &'static str = "generation,best_fitness,mean_fitness,best_error";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.generation, r.best_fitness, r.mean_fitness, r.best_error
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome<T> {
    pub best: Chromosome<T>,
    pub population: Population<T>,
    pub log: GaLog,
}

/// Evenly spaced subset of `patterns` of size `count`.
fn fitness_subset<T: Scalar>(
    patterns: &[TrainingPattern<T>],
    count: Option<usize>,
) -> Vec<TrainingPattern<T>> {
    match count {
        Some(n) if n < patterns.len() => (0..n)
            .map(|i| patterns[i * patterns.len() / n].clone())
            .collect(),
        _ => patterns.to_vec(),
    }
}

/// Evaluates unevaluated members; returns each member's error (`None` for cached ones).
fn evaluate_members<T: Scalar>(
    members: &mut [Chromosome<T>],
    topology: &NetworkTopology,
    patterns: &[TrainingPattern<T>],
) -> Result<Vec<T>> {
    members
        .iter_mut()
        .map(|m| match m.fitness {
            Some(f) => Ok(error_from_fitness(f)),
            None => {
                let (f, e) = evaluate_one(m, topology, patterns)?;
                m.fitness = Some(f);
                Ok(e)
            }
        })
        .collect()
}

fn error_from_fitness<T: Scalar>(f: T) -> T {
    if f > T::zero() {
        T::one() / f - T::one()
    } else {
        T::infinity()
    }
}

/// Index of the fittest member; ties go to the lowest index.
fn fittest<T: Scalar>(members: &[Chromosome<T>]) -> usize {
    let mut best = 0;
    for (i, m) in members.iter().enumerate().skip(1) {
        if m.fitness_or_zero() > members[best].fitness_or_zero() {
            best = i;
        }
    }
    best
}

fn log_row<T: Scalar>(generation: usize, members: &[Chromosome<T>], errors: &[T]) -> GaLogRow {
    let best = fittest(members);
    let mean = members
        .iter()
        .map(|m| m.fitness_or_zero().as_f64())
        .sum::<f64>()
        / members.len() as f64;
    GaLogRow {
        generation,
        best_fitness: members[best].fitness_or_zero().as_f64(),
        mean_fitness: mean,
        best_error: errors[best].as_f64(),
    }
}

/// Runs the GA for `config.generations` generations (stopping early once a
/// perfect fitness of 1 is found) and returns the best chromosome ever seen.
pub fn evolve<T: Scalar, R: Rng + ?Sized>(
    topology: &NetworkTopology,
    patterns: &[TrainingPattern<T>],
    config: &GaConfig<T>,
    rng: &mut R,
) -> Result<EvolveOutcome<T>> {
    config.validate()?;
    topology.validate()?;
    crate::train::check_patterns(&NetworkWeights::<T>::zeros(topology)?, patterns)?;
    let sample = fitness_subset(patterns, config.fitness_patterns);
    let genes = topology.parameter_count();
    let (lo, hi) = config.gene_range;
    let n = config.population_size;

    let mut members: Vec<Chromosome<T>> = (0..n)
        .map(|_| Chromosome::new(uniform_vec(genes, lo, hi, rng)))
        .collect();
    let errors = evaluate_members(&mut members, topology, &sample)?;
    let mut log = GaLog::default();
    log.rows.push(log_row(0, &members, &errors));
    let mut best_ever = members[fittest(&members)].clone();
    let mut generation = 0;

    while generation < config.generations && best_ever.fitness_or_zero() < T::one() {
        generation += 1;
        let mut ranked: Vec<usize> = (0..n).collect();
        ranked.sort_by(|&a, &b| {
            members[b]
                .fitness_or_zero()
                .partial_cmp(&members[a].fitness_or_zero())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let fitnesses: Vec<T> = members.iter().map(Chromosome::fitness_or_zero).collect();
        let mut next: Vec<Chromosome<T>> = ranked[..config.elitism]
            .iter()
            .map(|&i| members[i].clone())
            .collect();
        while next.len() < n {
            let a = roulette_select(&fitnesses, rng);
            let b = roulette_select(&fitnesses, rng);
            let (child_a, child_b) = crossover(&members[a], &members[b], config, rng)?;
            next.push(mutate(child_a, config, rng));
            let child_b = mutate(child_b, config, rng);
            if next.len() < n {
                next.push(child_b);
            }
        }
        members = next;
        let errors = evaluate_members(&mut members, topology, &sample)?;
        log.rows.push(log_row(generation, &members, &errors));
        let best = fittest(&members);
        if members[best].fitness_or_zero() > best_ever.fitness_or_zero() {
            best_ever = members[best].clone();
        }
    }

    Ok(EvolveOutcome {
        best: best_ever.clone(),
        population: Population {
            members,
            generation,
            best_ever,
        },
        log,
    })
}

/// Result of GA seeding followed by Levenberg-Marquardt training.
#[derive(Debug, Clone)]
pub struct GaLmOutcome<T> {
    pub weights: NetworkWeights<T>,
    /// Network decoded from the best chromosome.
    pub seed: NetworkWeights<T>,
    /// Summed error of `seed` over all training patterns.
    pub seed_error: T,
    pub final_error: T,
    pub termination: Termination,
    pub ga_log: GaLog,
    pub lm_log: TrainLog,
}

/// Evolves initial weights, then trains them with Levenberg-Marquardt.
pub fn ga_lm_train<T: Scalar, R: Rng + ?Sized>(
    topology: &NetworkTopology,
    patterns: &[TrainingPattern<T>],
    ga_config: &GaConfig<T>,
    lm_config: &LmConfig<T>,
    rng: &mut R,
) -> Result<GaLmOutcome<T>> {
    lm_config.validate()?;
    let evolved = evolve(topology, patterns, ga_config, rng)?;
    let seed = decode(&evolved.best, topology)?;
    let seed_error = total_error(&seed, patterns)?;
    let trained = train_lm(seed.clone(), patterns, lm_config)?;
    Ok(GaLmOutcome {
        weights: trained.weights,
        seed,
        seed_error,
        final_error: trained.final_error,
        termination: trained.termination,
        ga_log: evolved.log,
        lm_log: trained.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::ParamSlot;
    use crate::rng::SeededRng;
    use rand::SeedableRng;

    fn chrom(genes: &[f64]) -> Chromosome<f64> {
        Chromosome::new(genes.to_vec())
    }

    #[test]
    fn default_topology_has_121_genes() {
        let net = NetworkWeights::<f64>::zeros(&NetworkTopology::default()).unwrap();
        let c = encode(&net);
        assert_eq!(c.len(), 121);
        assert!(c.genes.iter().all(|&g| g == 0.0));
        assert!(decode(&chrom(&[0.0; 120]), &NetworkTopology::default()).is_err());
    }

    #[test]
    fn single_gene_perturbation_hits_documented_slot() {
        let t = NetworkTopology::new(2, vec![3], 2).unwrap();
        let base = NetworkWeights::<f64>::zeros(&t).unwrap();
        let shapes = t.layer_shapes();
        // Independent enumeration of the canonical order.
        let mut expected = Vec::new();
        for (layer, &(inputs, neurons)) in shapes.iter().enumerate() {
            for neuron in 0..neurons {
                for input in 0..inputs {
                    expected.push(ParamSlot::Weight {
                        layer,
                        neuron,
                        input,
                    });
                }
                expected.push(ParamSlot::Threshold { layer, neuron });
            }
        }
        for (g, slot) in expected.iter().enumerate() {
            let mut c = encode(&base);
            c.genes[g] = 1.0;
            let net = decode(&c, &t).unwrap();
            let mut hits = Vec::new();
            for (layer, &(inputs, neurons)) in shapes.iter().enumerate() {
                for neuron in 0..neurons {
                    for input in 0..inputs {
                        if net.weight(layer, neuron, input) != 0.0 {
                            hits.push(ParamSlot::Weight {
                                layer,
                                neuron,
                                input,
                            });
                        }
                    }
                    if net.threshold(layer, neuron) != 0.0 {
                        hits.push(ParamSlot::Threshold { layer, neuron });
                    }
                }
            }
            assert_eq!(hits, vec![*slot], "gene {g}");
        }
    }

    #[test]
    fn fitness_transform() {
        let t = NetworkTopology::new(1, vec![], 1).unwrap();
        let zero = chrom(&[0.0, 0.0]);
        let exact = vec![TrainingPattern::new(vec![1.0], vec![0.0]).unwrap()];
        assert_eq!(fitness(&zero, &t, &exact).unwrap(), 1.0);
        // Output 0 against targets ±1 on two patterns gives J = 1.
        let two = vec![
            TrainingPattern::bipolar(vec![1.0], vec![1.0]).unwrap(),
            TrainingPattern::bipolar(vec![1.0], vec![-1.0]).unwrap(),
        ];
        assert_eq!(fitness(&zero, &t, &two).unwrap(), 0.5);
        let better = chrom(&[1.0, 0.0]);
        let one = vec![TrainingPattern::bipolar(vec![1.0], vec![1.0]).unwrap()];
        assert!(fitness(&better, &t, &one).unwrap() > fitness(&zero, &t, &one).unwrap());
    }

    #[test]
    fn roulette_edge_cases() {
        let mut rng = SeededRng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_eq!(roulette_select(&[0.0, 0.0, 5.0], &mut rng), 2);
        }
        let mut counts = [0usize; 3];
        for _ in 0..30_000 {
            counts[roulette_select(&[0.0f64, 0.0, 0.0], &mut rng)] += 1;
        }
        assert!(counts.iter().all(|&c| c > 9_000), "{counts:?}");
    }

    #[test]
    fn one_point_structure() {
        let a = chrom(&[0.0; 6]);
        let b = chrom(&[1.0; 6]);
        for cut in 1..6 {
            let (x, y) = one_point(&a, &b, cut);
            assert!(x.genes[..cut].iter().all(|&g| g == 0.0));
            assert!(x.genes[cut..].iter().all(|&g| g == 1.0));
            assert!(y.genes[..cut].iter().all(|&g| g == 1.0));
        }
    }

    #[test]
    fn arithmetic_half_is_mean() {
        let a = chrom(&[1.0, -2.0, 4.0]);
        let b = chrom(&[3.0, 2.0, 0.0]);
        let (x, y) = arithmetic(&a, &b, 0.5);
        assert_eq!(x.genes, vec![2.0, 0.0, 2.0]);
        assert_eq!(y.genes, x.genes);
    }

    #[test]
    fn crossover_probability_zero_copies_parents() {
        let config = GaConfig {
            crossover_prob: 0.0,
            ..GaConfig::default()
        };
        let mut rng = SeededRng::seed_from_u64(2);
        let a = chrom(&[1.0, 2.0]);
        let b = chrom(&[3.0, 4.0]);
        let (x, y) = crossover(&a, &b, &config, &mut rng).unwrap();
        assert_eq!((x.genes, y.genes), (a.genes.clone(), b.genes.clone()));
        assert!(crossover(&a, &chrom(&[1.0]), &config, &mut rng).is_err());
    }

    #[test]
    fn mutation_laws() {
        let mut rng = SeededRng::seed_from_u64(3);
        let c = chrom(&[0.3; 50]);
        let none = GaConfig {
            mutation_prob: 0.0,
            ..GaConfig::default()
        };
        assert_eq!(mutate(c.clone(), &none, &mut rng), c);

        let all_uniform = GaConfig {
            mutation_prob: 1.0,
            mutation_kind: MutationKind::Uniform,
            gene_range: (-0.25, 0.25),
            ..GaConfig::default()
        };
        let m = mutate(c, &all_uniform, &mut rng);
        assert!(m.genes.iter().all(|&g| (-0.25..=0.25).contains(&g)));
    }

    #[test]
    fn gaussian_mutation_spread() {
        let mut rng = SeededRng::seed_from_u64(4);
        let config = GaConfig {
            mutation_prob: 1.0,
            gaussian_sigma: 0.1,
            ..GaConfig::default()
        };
        let m = mutate(chrom(&vec![0.0; 100_000]), &config, &mut rng);
        let n = m.len() as f64;
        let mean = m.genes.iter().sum::<f64>() / n;
        let var = m.genes.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var.sqrt() - 0.1).abs() < 0.003);
    }

    #[test]
    fn config_validation() {
        assert!(GaConfig::<f64>::default().validate().is_ok());
        let odd = GaConfig::<f64> {
            population_size: 7,
            ..GaConfig::default()
        };
        assert!(odd.validate().is_err());
        let bad = GaConfig::<f64> {
            mutation_prob: 1.5,
            ..GaConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn zero_generations_returns_initial_best() {
        let t = NetworkTopology::new(2, vec![2], 1).unwrap();
        let patterns = vec![
            TrainingPattern::bipolar(vec![1.0, 1.0], vec![-1.0]).unwrap(),
            TrainingPattern::bipolar(vec![1.0, -1.0], vec![1.0]).unwrap(),
        ];
        let config = GaConfig {
            generations: 0,
            population_size: 10,
            ..GaConfig::default()
        };
        let mut rng = SeededRng::seed_from_u64(5);
        let out = evolve(&t, &patterns, &config, &mut rng).unwrap();
        let best_initial = out
            .population
            .members
            .iter()
            .map(|m| m.fitness.unwrap())
            .fold(f64::MIN, f64::max);
        assert_eq!(out.best.fitness, Some(best_initial));
        assert_eq!(out.log.rows.len(), 1);
        assert_eq!(out.population.generation, 0);
    }

    #[test]
    fn fitness_subset_is_evenly_spaced() {
        let patterns: Vec<_> = (0..10)
            .map(|i| TrainingPattern::new(vec![i as f64], vec![0.0]).unwrap())
            .collect();
        let s = fitness_subset(&patterns, Some(5));
        let picked: Vec<f64> = s.iter().map(|p| p.input[0]).collect();
        assert_eq!(picked, vec![0.0, 2.0, 4.0, 6.0, 8.0]);
        assert_eq!(fitness_subset(&patterns, Some(20)).len(), 10);
    }
}
