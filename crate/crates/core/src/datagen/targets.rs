use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng as _;

use super::holder::{holder_quotient_probe, ProbeConfig};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::theory::{CompositionClass, HolderClass, Smoothness};

pub type TargetFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A regression function with declared smoothness on a box domain.
#[derive(Clone)]
pub struct TargetSpec {
    id: String,
    domain: Vec<(f64, f64)>,
    smoothness: Smoothness,
    func: TargetFn,
}

impl fmt::Debug for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetSpec")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

fn registration(id: &str, reason: impl Into<String>) -> Error {
    Error::Registration { id: id.to_string(), reason: reason.into() }
}

impl TargetSpec {
    /// Registers a Hölder target on `[0, 1]^d`. The numeric probe must not
    /// exceed the declared radius.
    pub fn holder(id: &str, class: HolderClass, func: TargetFn) -> Result<Self> {
        class.validate()?;
        let domain = vec![(0.0, 1.0); class.dim];
        let probe = holder_quotient_probe(&*func, class.s, &domain, &ProbeConfig::default())?;
        if probe > class.radius * (1.0 + 1e-9) {
            return Err(registration(id, format!("probe norm {probe:.12} exceeds declared K = {}", class.radius)));
        }
        Ok(Self { id: id.to_string(), domain, smoothness: Smoothness::Holder(class), func })
    }

    /// The constant function `c` on `[0, 1]^dim`.
    pub fn constant(c: f64, dim: usize) -> Self {
        Self {
            id: format!("constant({c})"),
            domain: vec![(0.0, 1.0); dim],
            smoothness: Smoothness::Holder(HolderClass { s: 1.0, radius: c.abs().max(f64::MIN_POSITIVE), dim }),
            func: Arc::new(move |_| c),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn smoothness(&self) -> &Smoothness {
        &self.smoothness
    }

    pub fn func(&self) -> &TargetFn {
        &self.func
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.func)(x)
    }

    pub(crate) fn sample_input(&self, rng: &mut Rng, out: &mut [f64]) {
        for (v, (a, b)) in out.iter_mut().zip(&self.domain) {
            *v = a + (b - a) * rng.random::<f64>();
        }
    }
}

/// Closed-form targets with hand-computed Hölder norms on the unit cube.
pub fn registry() -> Vec<TargetSpec> {
    static REGISTRY: OnceLock<Vec<TargetSpec>> = OnceLock::new();
    REGISTRY.get_or_init(build_registry).clone()
}

fn build_registry() -> Vec<TargetSpec> {
    let entries: [(&str, f64, f64, usize, TargetFn); 5] = [
        // 1 + 2 + 2
        ("square", 2.0, 5.0, 1, Arc::new(|x: &[f64]| x[0] * x[0])),
        // 1 + pi + pi^2
        ("sine", 2.0, 14.1, 1, Arc::new(|x: &[f64]| (PI * x[0]).sin())),
        ("identity", 1.5, 2.0, 1, Arc::new(|x: &[f64]| x[0])),
        // sqrt(1/2) + 1
        ("cusp", 0.5, 1.71, 1, Arc::new(|x: &[f64]| (x[0] - 0.5).abs().sqrt())),
        ("product", 2.0, 5.0, 2, Arc::new(|x: &[f64]| x[0] * x[1])),
    ];
    entries
        .into_iter()
        .map(|(id, s, k, d, f)| TargetSpec::holder(id, HolderClass { s, radius: k, dim: d }, f).expect("registry entry"))
        .collect()
}

pub fn registered_target(id: &str) -> Result<TargetSpec> {
    registry()
        .into_iter()
        .find(|t| t.id == id)
        .ok_or_else(|| registration(id, "no such registered target"))
}

/// One coordinate function `g_ij` of a composition layer.
#[derive(Clone)]
pub struct ComponentFn {
    pub name: String,
    /// Coordinates of the previous layer it reads.
    pub inputs: Vec<usize>,
    pub func: TargetFn,
}

impl fmt::Debug for ComponentFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, self.inputs)
    }
}

/// Named component reading `inputs`: `identity`, `square`, `sqrt`, `sin_pi`
/// (one input), `sum_sqrt` (`u_1 + sqrt(u_2)`), `sum` and `product` (any).
pub fn component(name: &str, inputs: &[usize]) -> Result<ComponentFn> {
    let arity = |k: usize| {
        if inputs.len() == k {
            Ok(())
        } else {
            Err(registration(name, format!("expects {k} inputs, got {}", inputs.len())))
        }
    };
    let func: TargetFn = match name {
        "identity" => {
            arity(1)?;
            Arc::new(|u: &[f64]| u[0])
        }
        "square" => {
            arity(1)?;
            Arc::new(|u: &[f64]| u[0] * u[0])
        }
        "sqrt" => {
            arity(1)?;
            Arc::new(|u: &[f64]| u[0].abs().sqrt())
        }
        "sin_pi" => {
            arity(1)?;
            Arc::new(|u: &[f64]| (PI * u[0]).sin())
        }
        "sum_sqrt" => {
            arity(2)?;
            Arc::new(|u: &[f64]| u[0] + u[1].abs().sqrt())
        }
        "sum" => Arc::new(|u: &[f64]| u.iter().sum()),
        "product" => Arc::new(|u: &[f64]| u.iter().product()),
        _ => return Err(registration(name, "unknown component")),
    };
    if inputs.is_empty() {
        return Err(registration(name, "a component must read at least one coordinate"));
    }
    Ok(ComponentFn { name: name.to_string(), inputs: inputs.to_vec(), func })
}

/// `h = g_q o ... o g_0`, where `layers[i]` holds the `d_{i+1}` components of
/// `g_i`. Each component may read at most `t_i` coordinates and is probed on
/// the unit cube of its inputs against `(beta_i, A)`.
pub fn build_composition_target(id: &str, class: CompositionClass, layers: Vec<Vec<ComponentFn>>) -> Result<TargetSpec> {
    class.validate()?;
    if layers.len() != class.betas.len() {
        return Err(registration(id, format!("{} layers for q + 1 = {}", layers.len(), class.betas.len())));
    }
    for (i, layer) in layers.iter().enumerate() {
        if layer.len() != class.dims[i + 1] {
            return Err(registration(id, format!("layer {i} has {} components, d_{} = {}", layer.len(), i + 1, class.dims[i + 1])));
        }
        for c in layer {
            let mut seen = c.inputs.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != c.inputs.len() || c.inputs.len() > class.active[i] {
                return Err(registration(
                    id,
                    format!("component {c:?} of layer {i} reads {} coordinates, t_{i} = {}", c.inputs.len(), class.active[i]),
                ));
            }
            if c.inputs.iter().any(|k| *k >= class.dims[i]) {
                return Err(registration(id, format!("component {c:?} of layer {i} reads past d_{i} = {}", class.dims[i])));
            }
            let domain = vec![(0.0, 1.0); c.inputs.len()];
            let probe = holder_quotient_probe(&*c.func, class.betas[i], &domain, &ProbeConfig::default())?;
            if probe > class.radius * (1.0 + 1e-9) {
                return Err(registration(id, format!("component {c:?} probes at {probe:.6} > A = {}", class.radius)));
            }
        }
    }
    let func: TargetFn = Arc::new(move |x: &[f64]| {
        let mut v = x.to_vec();
        let mut buf = Vec::new();
        for layer in &layers {
            v = layer
                .iter()
                .map(|c| {
                    buf.clear();
                    buf.extend(c.inputs.iter().map(|k| v[*k]));
                    (c.func)(&buf)
                })
                .collect();
        }
        v[0]
    });
    Ok(TargetSpec {
        id: id.to_string(),
        domain: vec![(0.0, 1.0); class.input_dim()],
        smoothness: Smoothness::Composition(class),
        func,
    })
}
