use clap::{Subcommand, ValueEnum};
use hypercurve::arrangement::{complex_of_irreducibles, decompose, intersection_poset, irreducible_flats};
use hypercurve::curveblowup::{blowup_faces, homology, proper_order_complex, verify_wedge};
use hypercurve::deligne::{parse_path, selftest};
use hypercurve::salvetti::{embedding_check, salvetti_complex, EmbeddingVariant};
use hypercurve::{Arrangement, Error, Garside, Letter, Morphism, Positive, Simple, Zonotope};
use serde_json::{json, Value};

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

/// How chamber names `cN` in paths are read and written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Labels {
    /// Lexicographic order of sign vectors, as listed by `zonotope`.
    Lex,
    /// Cyclic order around a rank-2 arrangement.
    Cyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Psi,
    PsiPrime,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Intersection poset with its cover relations.
    Poset,
    /// Irreducible flats and the irreducible summands.
    Irreducibles,
    /// Complex of nested sets of irreducible flats.
    Nested,
    /// Face lattice of the zonotope and chamber numbering.
    Zonotope,
    /// Salvetti cells and f-vector.
    Salvetti,
    /// Garside normal form of a path.
    Normalform {
        #[arg(long)]
        path: String,
    },
    /// Whether two paths give the same morphism.
    Equal {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Whether two loops at one chamber commute.
    Commute {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Conjugate commuting face twists to standard twists at one vertex.
    TwistStandardize {
        /// A loop; repeat for a family.
        #[arg(long = "loop", required = true)]
        loops: Vec<String>,
    },
    /// Faces of the compactified complement, one per nested set.
    BlowupFaces,
    /// Reduced homology of the curve complex and of the proper order complex.
    Homology,
    /// Wedge-of-spheres check on the curve complex.
    VerifyWedge,
    /// Sampled injectivity and avoidance check of the Salvetti embedding.
    EmbedCheck {
        #[arg(long, value_enum, default_value = "psi")]
        variant: Variant,
    },
    /// Randomized Garside invariant suite.
    GarsideSelftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Poset => "poset",
            Command::Irreducibles => "irreducibles",
            Command::Nested => "nested",
            Command::Zonotope => "zonotope",
            Command::Salvetti => "salvetti",
            Command::Normalform { .. } => "normalform",
            Command::Equal { .. } => "equal",
            Command::Commute { .. } => "commute",
            Command::TwistStandardize { .. } => "twist-standardize",
            Command::BlowupFaces => "blowup-faces",
            Command::Homology => "homology",
            Command::VerifyWedge => "verify-wedge",
            Command::EmbedCheck { .. } => "embed-check",
            Command::GarsideSelftest => "garside-selftest",
        }
    }
}

pub enum Output {
    Json(Value),
    Dot(String),
}

/// Result of a command plus whether it counts as a failure.
pub struct Outcome {
    pub output: Output,
    pub failed: bool,
}

impl From<Value> for Outcome {
    fn from(v: Value) -> Self {
        Outcome { output: Output::Json(v), failed: false }
    }
}

struct Names {
    label_of: Vec<usize>,
    chamber_of: Vec<usize>,
}

impl Names {
    fn new(z: &Zonotope, labels: Labels) -> Result<Names, Error> {
        let chamber_of = match labels {
            Labels::Lex => (0..z.chamber_count()).collect(),
            Labels::Cyclic => z.polygon_order()?,
        };
        let mut label_of = vec![0; chamber_of.len()];
        for (l, &c) in chamber_of.iter().enumerate() {
            label_of[c] = l;
        }
        Ok(Names { label_of, chamber_of })
    }

    fn simple(&self, s: Simple) -> Simple {
        Simple::new(self.chamber_of[s.source], self.chamber_of[s.target])
    }

    fn parse(&self, text: &str, cfg: &RunConfig) -> Result<(usize, Vec<Letter>), Error> {
        let (base, letters) = parse_path(text, self.chamber_of.len())?;
        if letters.len() > cfg.word_length_cap {
            return Err(Error::CapExceeded { what: format!("path of {} letters", letters.len()), cap: cfg.word_length_cap });
        }
        let letters = letters
            .into_iter()
            .map(|l| match l {
                Letter::Forward(s) => Letter::Forward(self.simple(s)),
                Letter::Backward(s) => Letter::Backward(self.simple(s)),
            })
            .collect();
        Ok((self.chamber_of[base], letters))
    }

    fn pair(&self, s: Simple) -> Value {
        json!([self.label_of[s.source], self.label_of[s.target]])
    }

    fn positive(&self, p: &Positive) -> Value {
        Value::Array(p.factors.iter().map(|&s| self.pair(s)).collect())
    }

    fn morphism(&self, m: &Morphism) -> Value {
        json!({
            "source": self.label_of[m.source],
            "target": self.label_of[m.target],
            "delta_square_inverse_power": m.k,
            "factors": self.positive(&m.positive),
        })
    }
}

fn face_json(z: &Zonotope, f: usize) -> Value {
    let face = z.face(f);
    json!({
        "covector": face.covector.to_string(z.hyperplane_count()),
        "dim": face.dim,
        "dual_flat": face.zero_set.to_vec(),
    })
}

fn no_dot(cmd: &Command) -> Error {
    Error::Validation(format!("{} has no DOT output", cmd.name()))
}

fn path_morphism(g: &Garside<'_>, names: &Names, text: &str, cfg: &RunConfig) -> Result<Morphism, Error> {
    let (base, letters) = names.parse(text, cfg)?;
    g.from_letters(base, &letters)
}

pub fn run(cmd: &Command, a: &Arrangement, cfg: &RunConfig, format: Format, labels: Labels) -> anyhow::Result<Outcome> {
    let dot = format == Format::Dot;
    if dot && !matches!(cmd, Command::Poset | Command::Nested | Command::Zonotope) {
        return Err(no_dot(cmd).into());
    }
    let zonotope = || Zonotope::with_cap(a, cfg.chamber_cap);
    let out: Outcome = match cmd {
        Command::Poset => {
            let poset = intersection_poset(a);
            let covers: Vec<(usize, usize)> = (0..poset.len())
                .flat_map(|i| (0..poset.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| {
                    let (x, y) = (&poset.flats[i], &poset.flats[j]);
                    y.codim == x.codim + 1 && x.key.is_subset(y.key)
                })
                .collect();
            if dot {
                let mut s = String::from("digraph poset {\n");
                for (i, f) in poset.flats.iter().enumerate() {
                    s.push_str(&format!("  f{i} [label=\"{}\"];\n", f.key));
                }
                for (i, j) in &covers {
                    s.push_str(&format!("  f{i} -> f{j};\n"));
                }
                s.push_str("}\n");
                return Ok(Outcome { output: Output::Dot(s), failed: false });
            }
            let flats: Vec<Value> =
                poset.flats.iter().map(|f| json!({"key": f.key.to_vec(), "codim": f.codim, "dim": f.dim()})).collect();
            json!({ "flats": flats, "covers": covers }).into()
        }
        Command::Irreducibles => {
            let poset = intersection_poset(a);
            let flats = irreducible_flats(a, &poset)?;
            let factors = decompose(a)?;
            json!({
                "irreducible_flats": flats.iter().map(|f| json!({"key": f.key.to_vec(), "codim": f.codim})).collect::<Vec<_>>(),
                "summands": factors.iter().map(|f| f.hyperplanes.to_vec()).collect::<Vec<_>>(),
                "irreducible": factors.len() == 1,
            })
            .into()
        }
        Command::Nested => {
            let (full, proper) = complex_of_irreducibles(a)?;
            if dot {
                return Ok(Outcome { output: Output::Dot(proper.to_dot("nested")), failed: false });
            }
            json!({
                "complex": full.to_json(),
                "proper": proper.to_json(),
                "f_vector": proper.f_vector(),
            })
            .into()
        }
        Command::Zonotope => {
            let z = zonotope()?;
            if dot {
                return Ok(Outcome { output: Output::Dot(z.chamber_graph_dot()), failed: false });
            }
            let mut v = z.to_json();
            v["f_vector"] = json!(z.f_vector());
            if labels == Labels::Cyclic {
                v["cyclic_order"] = json!(z.polygon_order()?);
            }
            v.into()
        }
        Command::Salvetti => {
            let z = zonotope()?;
            salvetti_complex(&z).to_json().into()
        }
        Command::Normalform { path } => {
            let z = zonotope()?;
            let g = Garside::new(&z)?;
            let names = Names::new(&z, labels)?;
            let f = path_morphism(&g, &names, path, cfg)?;
            let (num, den) = g.pn_normal_form(&f)?;
            json!({
                "normal_form": names.morphism(&f),
                "pn": { "positive": names.positive(&num), "negative": names.positive(&den) },
            })
            .into()
        }
        Command::Equal { lhs, rhs } => {
            let z = zonotope()?;
            let g = Garside::new(&z)?;
            let names = Names::new(&z, labels)?;
            let f1 = path_morphism(&g, &names, lhs, cfg)?;
            let f2 = path_morphism(&g, &names, rhs, cfg)?;
            json!({ "equal": g.equal(&f1, &f2), "lhs": names.morphism(&f1), "rhs": names.morphism(&f2) }).into()
        }
        Command::Commute { lhs, rhs } => {
            let z = zonotope()?;
            let g = Garside::new(&z)?;
            let names = Names::new(&z, labels)?;
            let f1 = path_morphism(&g, &names, lhs, cfg)?;
            let f2 = path_morphism(&g, &names, rhs, cfg)?;
            json!({ "commute": g.commute(&f1, &f2)? }).into()
        }
        Command::TwistStandardize { loops } => {
            let z = zonotope()?;
            let g = Garside::new(&z)?;
            let names = Names::new(&z, labels)?;
            let family = loops.iter().map(|p| path_morphism(&g, &names, p, cfg)).collect::<Result<Vec<_>, _>>()?;
            let r = g.simultaneous_standardize(&family)?;
            json!({
                "conjugator": names.morphism(&r.conjugator),
                "vertex": names.label_of[r.vertex],
                "faces": r.faces.iter().map(|&f| face_json(&z, f)).collect::<Vec<_>>(),
            })
            .into()
        }
        Command::BlowupFaces => blowup_faces(a)?.to_json().into(),
        Command::Homology => {
            let (_, proper) = complex_of_irreducibles(a)?;
            json!({
                "nested": homology(&proper).to_json(),
                "order_complex": homology(&proper_order_complex(a)).to_json(),
            })
            .into()
        }
        Command::VerifyWedge => verify_wedge(a)?.to_json().into(),
        Command::EmbedCheck { variant } => {
            let z = zonotope()?;
            let v = match variant {
                Variant::Psi => EmbeddingVariant::Psi,
                Variant::PsiPrime => EmbeddingVariant::PsiPrime,
            };
            let r = embedding_check(&z, v)?;
            json!({
                "variant": variant.to_possible_value().map(|p| p.get_name().to_string()),
                "points": r.points,
                "interpolants": r.interpolants,
                "collisions": r.collisions,
                "hits": r.hits,
                "pass": r.pass(),
            })
            .into()
        }
        Command::GarsideSelftest => {
            let z = zonotope()?;
            let g = Garside::new(&z)?;
            let r = selftest(&g, cfg.sample_count, cfg.word_length_cap, cfg.seed)?;
            let failed = !r.pass();
            let v = json!({
                "checks": serde_json::to_value(&r.checks)?,
                "pass": !failed,
                "samples": cfg.sample_count,
                "max_length": cfg.word_length_cap,
                "seed": cfg.seed,
            });
            Outcome { output: Output::Json(v), failed }
        }
    };
    Ok(out)
}
