use fixedbitset::FixedBitSet;

use super::{CoverRequirement, SetSystem};
use crate::error::{invalid, Error, Result};

const TRIANGLE_TOL: f64 = 1e-9;

/// Distances between locations, stored in original units.
///
/// Normalised distances are the stored value divided by the instance scale,
/// so the written form of an instance round-trips exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// Points on the line (`y = 0`) or in the plane; Euclidean distance.
    Points(Vec<[f64; 2]>),
    /// Explicit symmetric matrix, row-major, `size * size` entries.
    Matrix { size: usize, dist: Vec<f64> },
}

impl Metric {
    pub fn len(&self) -> usize {
        match self {
            Metric::Points(p) => p.len(),
            Metric::Matrix { size, .. } => *size,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn raw(&self, i: usize, j: usize) -> f64 {
        match self {
            Metric::Points(p) => {
                let (a, b) = (p[i], p[j]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            }
            Metric::Matrix { size, dist } => dist[i * size + j],
        }
    }

    fn diameter(&self) -> f64 {
        let l = self.len();
        let mut d: f64 = 0.0;
        for i in 0..l {
            for j in i + 1..l {
                d = d.max(self.raw(i, j));
            }
        }
        d
    }

    fn validate(&self) -> Result<()> {
        match self {
            Metric::Points(p) => {
                if let Some(i) = p
                    .iter()
                    .position(|c| !c[0].is_finite() || !c[1].is_finite())
                {
                    return Err(Error::Validation(format!(
                        "location {i}: non-finite coordinate"
                    )));
                }
            }
            Metric::Matrix { size, dist } => {
                let l = *size;
                if dist.len() != l * l {
                    return invalid(format!(
                        "matrix has {} entries, expected {}",
                        dist.len(),
                        l * l
                    ));
                }
                for i in 0..l {
                    if dist[i * l + i] != 0.0 {
                        return Err(Error::Validation(format!("d({i}, {i}) must be 0")));
                    }
                    for j in 0..l {
                        let v = dist[i * l + j];
                        if !(v.is_finite() && v >= 0.0) {
                            return Err(Error::Validation(format!(
                                "d({i}, {j}) = {v} is not a finite non-negative number"
                            )));
                        }
                        if v != dist[j * l + i] {
                            return Err(Error::Validation(format!("d({i}, {j}) is not symmetric")));
                        }
                    }
                }
                let scale = self.diameter().max(1.0);
                for i in 0..l {
                    for j in 0..l {
                        for k in 0..l {
                            if dist[i * l + k]
                                > dist[i * l + j] + dist[j * l + k] + TRIANGLE_TOL * scale
                            {
                                return Err(Error::Validation(format!(
                                    "triangle inequality fails for d({i}, {k}) via {j}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A mobile vaccine clinic instance: public locations in a metric space and
/// private people, each with the set of locations they visit.
///
/// Distances are normalised so the diameter is 1; when all locations
/// coincide the diameter is 0 and the scale is left at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct VaccInstance {
    metric: Metric,
    scale: f64,
    visits: Vec<Vec<usize>>,
    location_labels: Vec<String>,
    person_labels: Vec<String>,
}

impl VaccInstance {
    /// Validates and normalises an instance. Visit sets are sorted; labels
    /// default to the numeric ids.
    pub fn new(metric: Metric, visits: Vec<Vec<usize>>) -> Result<Self> {
        metric.validate()?;
        let l = metric.len();
        if l == 0 {
            return invalid("an instance needs at least one location");
        }
        let mut visits = visits;
        for (p, v) in visits.iter_mut().enumerate() {
            if v.is_empty() {
                return Err(Error::Validation(format!("person {p} visits no location")));
            }
            v.sort_unstable();
            if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!(
                    "person {p} lists location {} twice",
                    w[0]
                )));
            }
            if let Some(&bad) = v.iter().find(|&&j| j >= l) {
                return Err(Error::Validation(format!(
                    "person {p}: location {bad} out of range ({l} locations)"
                )));
            }
        }
        let d = metric.diameter();
        let scale = if d > 0.0 { d } else { 1.0 };
        Ok(VaccInstance {
            location_labels: (0..l).map(|i| i.to_string()).collect(),
            person_labels: (0..visits.len()).map(|i| i.to_string()).collect(),
            metric,
            scale,
            visits,
        })
    }

    /// Replaces the default labels.
    pub fn with_labels(mut self, locations: Vec<String>, people: Vec<String>) -> Result<Self> {
        if locations.len() != self.num_locations() || people.len() != self.num_people() {
            return invalid("label counts do not match the instance");
        }
        self.location_labels = locations;
        self.person_labels = people;
        Ok(self)
    }

    pub fn num_people(&self) -> usize {
        self.visits.len()
    }

    pub fn num_locations(&self) -> usize {
        self.metric.len()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Original units per normalised unit.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn visits(&self, person: usize) -> &[usize] {
        &self.visits[person]
    }

    pub fn location_labels(&self) -> &[String] {
        &self.location_labels
    }

    pub fn person_labels(&self) -> &[String] {
        &self.person_labels
    }

    /// Normalised distance between two locations.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric.raw(i, j) / self.scale
    }

    /// `d(S_p, j)`: distance from location `j` to the nearest location the
    /// person visits.
    pub fn service_distance(&self, person: usize, location: usize) -> f64 {
        self.visits[person]
            .iter()
            .map(|&l| self.distance(l, location))
            .fold(f64::INFINITY, f64::min)
    }

    /// Precomputes `d(S_p, j)` for every person and location.
    pub fn service_distances(&self) -> ServiceDistances {
        let l = self.num_locations();
        let mut d = Vec::with_capacity(self.num_people() * l);
        for p in 0..self.num_people() {
            for j in 0..l {
                d.push(self.service_distance(p, j));
            }
        }
        ServiceDistances {
            people: self.num_people(),
            locations: l,
            d,
        }
    }

    /// The set system at radius `r`: universe = people, one set per location
    /// holding the people within `r` of it.
    pub fn build_radius_sets(&self, r: f64) -> SetSystem {
        self.service_distances().radius_sets(r)
    }

    /// Service cost of the `⌈rho·n⌉`-th closest person to `facilities`.
    pub fn objective_percentile(&self, facilities: &[usize], rho: CoverRequirement) -> Result<f64> {
        self.service_distances()
            .objective_percentile(facilities, rho)
    }
}

/// Person-to-location service distances of one instance, row per person.
#[derive(Debug, Clone)]
pub struct ServiceDistances {
    people: usize,
    locations: usize,
    d: Vec<f64>,
}

impl ServiceDistances {
    pub fn get(&self, person: usize, location: usize) -> f64 {
        self.d[person * self.locations + location]
    }

    pub fn radius_sets(&self, r: f64) -> SetSystem {
        let mut sets = vec![FixedBitSet::with_capacity(self.people); self.locations];
        for p in 0..self.people {
            let row = &self.d[p * self.locations..(p + 1) * self.locations];
            for (j, &dist) in row.iter().enumerate() {
                if dist <= r {
                    sets[j].insert(p);
                }
            }
        }
        SetSystem::from_bitsets(self.people, sets)
    }

    /// Each person's distance to the nearest facility.
    pub fn costs(&self, facilities: &[usize]) -> Result<Vec<f64>> {
        if facilities.is_empty() {
            return invalid("facility set is empty");
        }
        if let Some(&bad) = facilities.iter().find(|&&j| j >= self.locations) {
            return invalid(format!(
                "facility {bad} out of range ({} locations)",
                self.locations
            ));
        }
        Ok((0..self.people)
            .map(|p| {
                facilities
                    .iter()
                    .map(|&j| self.get(p, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect())
    }

    pub fn objective_percentile(&self, facilities: &[usize], rho: CoverRequirement) -> Result<f64> {
        let mut costs = self.costs(facilities)?;
        if costs.is_empty() {
            return Ok(0.0);
        }
        costs.sort_by(f64::total_cmp);
        let idx = rho.target(self.people).clamp(1, self.people) - 1;
        Ok(costs[idx])
    }
}
