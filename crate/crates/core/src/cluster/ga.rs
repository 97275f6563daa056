//! Genetic graph clustering with the locus-based adjacency encoding.
//!
//! Gene `v` of an individual names one neighbour of node `v` (or `v`
//! itself). The decoded partition is the set of connected components of the
//! links `v -> gene[v]`, so every genotype decodes to a valid clustering and
//! no cluster can span two components of the graph. Fitness is the weighted
//! modularity of the decoded partition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Clustering, DocumentGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Probability that an offspring has one gene re-drawn.
    pub mutation_rate: f64,
    pub elite_count: usize,
    pub tournament_size: usize,
    pub rng_seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 100,
            crossover_rate: 0.8,
            mutation_rate: 0.2,
            elite_count: 1,
            tournament_size: 2,
            rng_seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| (0.0..=1.0).contains(&r);
        if !rate_ok(self.crossover_rate) || !rate_ok(self.mutation_rate) {
            return Err(Error::InvalidParameter(
                "crossover and mutation rates must lie in [0, 1]".into(),
            ));
        }
        if self.population_size == 0 || self.generations == 0 || self.tournament_size == 0 {
            return Err(Error::InvalidParameter(
                "population size, generations and tournament size must be at least 1".into(),
            ));
        }
        if self.elite_count > self.population_size {
            return Err(Error::InvalidParameter(
                "elite count cannot exceed the population size".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub clustering: Clustering,
    /// Modularity of `clustering`.
    pub fitness: f64,
    /// Best fitness of each generation, the initial population first.
    pub best_per_generation: Vec<f64>,
}

/// Weighted Newman modularity of a partition. Zero for a graph without
/// edges.
pub fn modularity(graph: &DocumentGraph, clustering: &Clustering) -> f64 {
    let labels = clustering.assignment();
    let k = clustering.k();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    let mut two_m = 0.0;
    for v in 0..graph.node_count() {
        for &(u, w) in graph.neighbors(v) {
            two_m += w;
            degree[labels[v]] += w;
            if labels[u] == labels[v] {
                internal[labels[v]] += w;
            }
        }
    }
    if two_m == 0.0 {
        return 0.0;
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(l, d)| l / two_m - (d / two_m) * (d / two_m))
        .sum()
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Connected components of the links `v -> genotype[v]`.
pub fn decode(genotype: &[usize]) -> Clustering {
    let mut parent: Vec<usize> = (0..genotype.len()).collect();
    for (v, &u) in genotype.iter().enumerate() {
        let (a, b) = (find(&mut parent, v), find(&mut parent, u));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let roots: Vec<usize> = (0..genotype.len()).map(|v| find(&mut parent, v)).collect();
    Clustering::from_labels(&roots)
}

struct Individual {
    genes: Vec<usize>,
    fitness: f64,
}

fn random_gene(graph: &DocumentGraph, v: usize, rng: &mut ChaCha8Rng, allow_self: bool) -> usize {
    let neighbors = graph.neighbors(v);
    let choices = neighbors.len() + usize::from(allow_self);
    if neighbors.is_empty() {
        return v;
    }
    let pick = rng.gen_range(0..choices);
    if pick == neighbors.len() {
        v
    } else {
        neighbors[pick].0
    }
}

fn evaluate(graph: &DocumentGraph, genomes: Vec<Vec<usize>>) -> Vec<Individual> {
    genomes
        .into_par_iter()
        .map(|genes| {
            let fitness = modularity(graph, &decode(&genes));
            Individual { genes, fitness }
        })
        .collect()
}

fn tournament<'a>(
    population: &'a [Individual],
    size: usize,
    rng: &mut ChaCha8Rng,
) -> &'a Individual {
    let mut best = &population[rng.gen_range(0..population.len())];
    for _ in 1..size {
        let challenger = &population[rng.gen_range(0..population.len())];
        if challenger.fitness > best.fitness {
            best = challenger;
        }
    }
    best
}

/// Evolves locus-based genotypes on `graph` and returns the best decoded
/// partition. Deterministic for a fixed seed: random draws happen on one
/// thread and only fitness evaluation runs in parallel.
pub fn ga_cluster(graph: &DocumentGraph, params: &GaParams) -> Result<GaOutcome> {
    params.validate()?;
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::TooFewDocuments(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);

    let initial: Vec<Vec<usize>> = (0..params.population_size)
        .map(|_| {
            (0..n)
                .map(|v| random_gene(graph, v, &mut rng, false))
                .collect()
        })
        .collect();
    let mut population = evaluate(graph, initial);
    let by_fitness = |a: &Individual, b: &Individual| b.fitness.total_cmp(&a.fitness);
    population.sort_by(by_fitness);
    let mut best_per_generation = vec![population[0].fitness];

    for _ in 0..params.generations {
        let mut offspring = Vec::with_capacity(params.population_size - params.elite_count);
        while offspring.len() < params.population_size - params.elite_count {
            let a = tournament(&population, params.tournament_size, &mut rng);
            let b = tournament(&population, params.tournament_size, &mut rng);
            let mut child = if rng.gen_bool(params.crossover_rate) {
                a.genes
                    .iter()
                    .zip(&b.genes)
                    .map(|(&x, &y)| if rng.gen_bool(0.5) { x } else { y })
                    .collect()
            } else {
                a.genes.clone()
            };
            if rng.gen_bool(params.mutation_rate) {
                let v = rng.gen_range(0..n);
                child[v] = random_gene(graph, v, &mut rng, true);
            }
            offspring.push(child);
        }
        let mut next = evaluate(graph, offspring);
        next.extend(population.drain(..params.elite_count));
        next.sort_by(by_fitness);
        population = next;
        best_per_generation.push(population[0].fitness);
    }

    let best = &population[0];
    Ok(GaOutcome {
        clustering: decode(&best.genes),
        fitness: best.fitness,
        best_per_generation,
    })
}
