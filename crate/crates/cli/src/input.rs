use std::fs;
use std::path::PathBuf;

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use evasion_core::complex::VERTEX_SOFT_LIMIT;
use evasion_core::fixtures;
use evasion_core::generate::random_complex;
use evasion_core::graph::{builtin_property, EdgeUniverse, PropertyOracle, TruthTable};
use evasion_core::perm::{PermGroup, Permutation, DEFAULT_GROUP_CAP};
use evasion_core::{standard_complex, Complex, StandardKind};

use crate::CliError;

/// Where a complex comes from. Exactly one source must be given.
#[derive(Args, Debug, Clone)]
pub struct ComplexArgs {
    /// Facets as a JSON array of vertex lists, e.g. '[[0,1],[1,2]]'.
    #[arg(long)]
    pub facets: Option<String>,

    /// JSON file holding `{"facets": [...]}` or `{"simplices": [...]}`.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Named complex: hollow-triangle, two-triangles, annulus, two-hole-disk,
    /// torus, or full:N, boundary:N, horn:N on vertices 0..=N.
    #[arg(long)]
    pub fixture: Option<String>,

    /// Random complex on at most this many vertices, drawn from --seed.
    #[arg(long, value_name = "MAX_VERTICES")]
    pub random: Option<u32>,
}

impl ComplexArgs {
    pub fn load(&self, seed: u64) -> Result<Complex, CliError> {
        let c = self.load_unchecked(seed)?;
        if c.vertex_count() > VERTEX_SOFT_LIMIT {
            eprintln!(
                "warning: {} vertices exceeds the supported {VERTEX_SOFT_LIMIT}; expect long running times",
                c.vertex_count()
            );
        }
        Ok(c)
    }

    fn load_unchecked(&self, seed: u64) -> Result<Complex, CliError> {
        let given = [
            self.facets.is_some(),
            self.input.is_some(),
            self.fixture.is_some(),
            self.random.is_some(),
        ];
        match given.iter().filter(|&&g| g).count() {
            0 => {
                return Err(CliError::usage(
                    "one of --facets, --input, --fixture or --random is required",
                ))
            }
            1 => {}
            _ => {
                return Err(CliError::usage(
                    "--facets, --input, --fixture and --random are mutually exclusive",
                ))
            }
        }
        if let Some(text) = &self.facets {
            let lists: Vec<Vec<u32>> =
                serde_json::from_str(text).map_err(|e| CliError::usage(format!("--facets: {e}")))?;
            return Complex::from_vertex_lists(lists).map_err(|e| CliError::usage(format!("--facets: {e}")));
        }
        if let Some(path) = &self.input {
            let text =
                fs::read_to_string(path).map_err(|e| CliError::usage(format!("--input {}: {e}", path.display())))?;
            return serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("--input {}: {e}", path.display())));
        }
        if let Some(name) = &self.fixture {
            return fixture(name).map_err(|e| CliError::usage(format!("--fixture: {e}")));
        }
        let max_vertices = self.random.expect("one source given");
        if max_vertices == 0 {
            return Err(CliError::usage("--random: need at least one vertex"));
        }
        Ok(random_complex(&mut ChaCha8Rng::seed_from_u64(seed), max_vertices, 3))
    }
}

fn fixture(name: &str) -> Result<Complex, String> {
    if let Some((kind, n)) = name.split_once(':') {
        let kind = match kind {
            "full" => StandardKind::Full,
            "boundary" => StandardKind::Boundary,
            "horn" => StandardKind::Horn,
            other => return Err(format!("unknown standard complex `{other}`")),
        };
        let n: usize = n.parse().map_err(|_| format!("bad index `{n}`"))?;
        return standard_complex(kind, n).map_err(|e| e.to_string());
    }
    match name {
        "hollow-triangle" => Ok(fixtures::hollow_triangle()),
        "two-triangles" => Ok(fixtures::two_triangles()),
        "annulus" => Ok(fixtures::annulus()),
        "two-hole-disk" => Ok(fixtures::two_hole_disk()),
        "torus" => Ok(fixtures::seven_vertex_torus()),
        other => Err(format!("unknown fixture `{other}`")),
    }
}

/// A graph property: a builtin by name or a truth table file.
#[derive(Args, Debug, Clone)]
pub struct PropertyArgs {
    /// Builtin property name.
    #[arg(long)]
    pub property: Option<String>,

    /// Parameter of the builtin property.
    #[arg(long)]
    pub param: Option<u64>,

    /// Vertex count for graphs on n vertices.
    #[arg(short = 'n', long = "vertices")]
    pub vertices: Option<u32>,

    /// Size of the left part of a bipartite universe.
    #[arg(long, requires = "right", conflicts_with = "vertices")]
    pub left: Option<u32>,

    /// Size of the right part of a bipartite universe.
    #[arg(long, requires = "left")]
    pub right: Option<u32>,

    /// JSON truth table `{"n": 4, "ones": [...]}` or `{"left": .., "right": .., "ones": [...]}`.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["property", "vertices", "left"])]
    pub table: Option<PathBuf>,
}

impl PropertyArgs {
    pub fn is_given(&self) -> bool {
        self.property.is_some() || self.table.is_some()
    }

    pub fn load(&self) -> Result<PropertyOracle, CliError> {
        if let Some(path) = &self.table {
            let text =
                fs::read_to_string(path).map_err(|e| CliError::usage(format!("--table {}: {e}", path.display())))?;
            let table: TruthTable =
                serde_json::from_str(&text).map_err(|e| CliError::usage(format!("--table {}: {e}", path.display())))?;
            let name = path
                .file_stem()
                .map_or("table".into(), |s| s.to_string_lossy().into_owned());
            return table
                .into_oracle(name)
                .map_err(|e| CliError::usage(format!("--table {}: {e}", path.display())));
        }
        let name = self
            .property
            .as_deref()
            .ok_or_else(|| CliError::usage("one of --property or --table is required"))?;
        let universe = match (self.vertices, self.left, self.right) {
            (Some(n), None, None) => EdgeUniverse::complete(n),
            (None, Some(l), Some(r)) => EdgeUniverse::bipartite(l, r),
            _ => return Err(CliError::usage("--property needs -n, or --left with --right")),
        }
        .map_err(|e| CliError::usage(format!("-n/--left/--right: {e}")))?;
        builtin_property(name, universe, self.param).map_err(|e| CliError::usage(format!("--property: {e}")))
    }
}

/// Group generated by permutations in cycle notation or as image arrays.
pub fn load_group(generators: &[String], degree: usize) -> Result<PermGroup, CliError> {
    if generators.is_empty() {
        return Err(CliError::usage("--perm is required at least once"));
    }
    let perms = generators
        .iter()
        .map(|g| Permutation::parse(g, Some(degree)).map_err(|e| CliError::usage(format!("--perm `{g}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    PermGroup::from_generators(degree, &perms, DEFAULT_GROUP_CAP).map_err(|e| CliError::usage(format!("--perm: {e}")))
}
