use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::morphisms::{search, MorphKind, MorphismWitness};
use crate::structures::io::Document;
use crate::structures::{Relation, Structure};

use super::{enumerate_g, logic_action, oplus, split_parts, ParityPerm, SumError};

fn related(a: &Structure, b: &Structure, kind: MorphKind) -> Result<bool, SumError> {
    Ok(search(a, b, kind)?.is_some())
}

fn iso(a: &Structure, b: &Structure) -> Result<bool, SumError> {
    related(a, b, MorphKind::Isomorphism)
}

/// Finite stand-in for the two classes and the maps linking them: every
/// second-family structure is classified to a first-family index.
#[derive(Clone, Debug)]
pub struct WitnessKit {
    family_prime: Vec<Structure>,
    family_second: Vec<Structure>,
    classify: Vec<usize>,
    section: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct KitDocument {
    family_prime: Vec<Document>,
    family_second: Vec<Document>,
    classify: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    section: Option<Vec<usize>>,
}

impl WitnessKit {
    /// Checks that first-family orders are irreflexive, second-family
    /// orders reflexive, indices in range, and that the classifier is
    /// constant on isomorphism classes.
    pub fn new(
        family_prime: Vec<Structure>,
        family_second: Vec<Structure>,
        classify: Vec<usize>,
        section: Option<Vec<usize>>,
    ) -> Result<Self, SumError> {
        for (i, x) in family_prime.iter().enumerate() {
            let order = x.relation(Relation::Order).ok_or_else(|| {
                SumError::InvalidKit(format!("first-family member {i} has no order relation"))
            })?;
            if let Some(&(a, _)) = order.iter().find(|(a, b)| a == b) {
                return Err(SumError::InvalidKit(format!(
                    "first-family member {i} has {a} in order relation with itself"
                )));
            }
        }
        for (j, z) in family_second.iter().enumerate() {
            let refl = z.self_related(Relation::Order);
            if let Some(v) = z.domain().iter().find(|v| !refl.contains(v)) {
                return Err(SumError::InvalidKit(format!(
                    "second-family member {j} has {v} not in order relation with itself"
                )));
            }
        }
        if classify.len() != family_second.len() {
            return Err(SumError::InvalidKit("classifier must cover the second family".into()));
        }
        if let Some(&c) = classify.iter().find(|&&c| c >= family_prime.len()) {
            return Err(SumError::InvalidKit(format!("classifier index {c} out of range")));
        }
        if let Some(s) = &section {
            if s.len() != family_prime.len() || s.iter().any(|&j| j >= family_second.len()) {
                return Err(SumError::InvalidKit("section must map first family into second".into()));
            }
        }
        let pairs: Vec<(usize, usize)> = (0..family_second.len())
            .flat_map(|i| (i + 1..family_second.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| classify[i] != classify[j])
            .collect();
        let bad = pairs
            .par_iter()
            .map(|&(i, j)| iso(&family_second[i], &family_second[j]).map(|b| b.then_some((i, j))))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .min();
        if let Some((i, j)) = bad {
            return Err(SumError::ClassifierNotInvariant(i, j, classify[i], classify[j]));
        }
        Ok(WitnessKit { family_prime, family_second, classify, section })
    }

    pub fn family_prime(&self) -> &[Structure] {
        &self.family_prime
    }

    pub fn family_second(&self) -> &[Structure] {
        &self.family_second
    }

    pub fn classify(&self, j: usize) -> usize {
        self.classify[j]
    }

    pub fn section(&self, i: usize) -> Option<usize> {
        self.section.as_ref().map(|s| s[i])
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, SumError> {
        let doc: KitDocument =
            serde_json::from_slice(bytes).map_err(|e| SumError::InvalidKit(e.to_string()))?;
        let load = |ds: Vec<Document>| {
            ds.into_iter()
                .map(|d| d.into_structure().map_err(|e| SumError::InvalidKit(e.to_string())))
                .collect::<Result<Vec<_>, _>>()
        };
        WitnessKit::new(load(doc.family_prime)?, load(doc.family_second)?, doc.classify, doc.section)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(KitDocument {
            family_prime: self.family_prime.iter().map(Document::from_structure).collect(),
            family_second: self.family_second.iter().map(Document::from_structure).collect(),
            classify: self.classify.clone(),
            section: self.section.clone(),
        })
        .expect("serializable")
    }
}

/// Representatives for the finitely-many-classes variant: second-family
/// members isomorphic to `z_reps[i]` (`i < n-1`) pair with first-family
/// members isomorphic to `x_reps[i]`; all others pair with `x_reps[n-1]`.
#[derive(Clone, Debug)]
pub struct NClasses {
    z_reps: Vec<Structure>,
    x_reps: Vec<Structure>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NClassesDocument {
    z: Vec<Document>,
    x: Vec<Document>,
}

impl NClasses {
    /// Representatives must be equally many (at least one), the `z`s
    /// pairwise non-isomorphic and the `x`s pairwise not bi-embeddable.
    pub fn new(z_reps: Vec<Structure>, x_reps: Vec<Structure>) -> Result<Self, SumError> {
        if z_reps.is_empty() || z_reps.len() != x_reps.len() {
            return Err(SumError::InvalidKit("need n ≥ 1 representatives on each side".into()));
        }
        let n = z_reps.len();
        for i in 0..n {
            for j in i + 1..n {
                if iso(&z_reps[i], &z_reps[j])? {
                    return Err(SumError::InvalidKit(format!("z representatives {i} and {j} are isomorphic")));
                }
                if related(&x_reps[i], &x_reps[j], MorphKind::Embedding)?
                    && related(&x_reps[j], &x_reps[i], MorphKind::Embedding)?
                {
                    return Err(SumError::InvalidKit(format!("x representatives {i} and {j} are bi-embeddable")));
                }
            }
        }
        Ok(NClasses { z_reps, x_reps })
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, SumError> {
        let doc: NClassesDocument =
            serde_json::from_slice(bytes).map_err(|e| SumError::InvalidKit(e.to_string()))?;
        let load = |ds: Vec<Document>| {
            ds.into_iter()
                .map(|d| d.into_structure().map_err(|e| SumError::InvalidKit(e.to_string())))
                .collect::<Result<Vec<_>, _>>()
        };
        NClasses::new(load(doc.z)?, load(doc.x)?)
    }

    fn partner(&self, z: &Structure) -> Result<&Structure, SumError> {
        let n = self.z_reps.len();
        for i in 0..n - 1 {
            if iso(z, &self.z_reps[i])? {
                return Ok(&self.x_reps[i]);
            }
        }
        Ok(&self.x_reps[n - 1])
    }
}

#[derive(Clone, Debug)]
pub enum Variant {
    Full,
    NClasses(NClasses),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WEntry {
    /// Index into the first family.
    pub x: usize,
    /// Index into the second family.
    pub z: usize,
    pub g: ParityPerm,
}

#[derive(Clone, Debug)]
pub struct WSpace {
    pub k: usize,
    pub entries: Vec<WEntry>,
    /// `s[i][j]`: the x-part of entry `i` embeds into that of entry `j`.
    pub s: Vec<Vec<bool>>,
    /// `f[i][j]`: the z-parts are isomorphic.
    pub f: Vec<Vec<bool>>,
    /// `z_embeds[i][j]`: the z-part of entry `i` embeds into that of `j`.
    pub z_embeds: Vec<Vec<bool>>,
    /// `images[i]` is the logic action of `g` on `x ⊕ z`.
    pub images: Vec<Structure>,
}

impl WSpace {
    pub fn to_json(&self) -> Value {
        let matrix = |m: &Vec<Vec<bool>>| -> Vec<Vec<u8>> {
            m.iter().map(|r| r.iter().map(|&b| b as u8).collect()).collect()
        };
        json!({
            "k": self.k,
            "entries": self.entries,
            "S": matrix(&self.s),
            "F": matrix(&self.f),
            "images": self.images.iter().map(Document::from_structure).collect::<Vec<_>>(),
        })
    }
}

type Cache = BTreeMap<(usize, usize), bool>;

fn relation_matrix(
    family: &[Structure],
    used: &BTreeSet<usize>,
    kind: MorphKind,
) -> Result<Cache, SumError> {
    let pairs: Vec<(usize, usize)> = used.iter().flat_map(|&a| used.iter().map(move |&b| (a, b))).collect();
    pairs
        .par_iter()
        .map(|&(a, b)| Ok(((a, b), related(&family[a], &family[b], kind)?)))
        .collect()
}

/// All `(x, z, g)` with `x` isomorphic to the partner of `z` and `g` in
/// the parity group for `k`, with S, F and the image of each entry.
pub fn assemble_w(kit: &WitnessKit, k: usize, variant: &Variant) -> Result<WSpace, SumError> {
    if k == 0 {
        return Err(SumError::InvalidKit("k must be at least 1".into()));
    }
    let group = enumerate_g(k);
    let prime = &kit.family_prime;
    let second = &kit.family_second;

    let partners: Vec<&Structure> = (0..second.len())
        .map(|j| match variant {
            Variant::Full => Ok(&prime[kit.classify[j]]),
            Variant::NClasses(reps) => reps.partner(&second[j]),
        })
        .collect::<Result<_, _>>()?;

    let mut members = Vec::new();
    for (j, partner) in partners.iter().enumerate() {
        let xs = prime
            .par_iter()
            .enumerate()
            .map(|(i, x)| Ok(iso(x, partner)?.then_some(i)))
            .collect::<Result<Vec<_>, SumError>>()?;
        members.extend(xs.into_iter().flatten().map(|i| (i, j)));
    }
    let entries: Vec<WEntry> = members
        .iter()
        .flat_map(|&(x, z)| group.iter().map(move |g| WEntry { x, z, g: g.clone() }))
        .collect();

    let xs: BTreeSet<usize> = entries.iter().map(|e| e.x).collect();
    let zs: BTreeSet<usize> = entries.iter().map(|e| e.z).collect();
    let x_emb = relation_matrix(prime, &xs, MorphKind::Embedding)?;
    let z_iso = relation_matrix(second, &zs, MorphKind::Isomorphism)?;
    let z_emb = relation_matrix(second, &zs, MorphKind::Embedding)?;
    let matrix = |c: &Cache, key: fn(&WEntry) -> usize| -> Vec<Vec<bool>> {
        entries
            .iter()
            .map(|a| entries.iter().map(|b| c[&(key(a), key(b))]).collect())
            .collect()
    };
    let images = entries
        .par_iter()
        .map(|e| logic_action(e.g.images(), &oplus(&prime[e.x], &second[e.z])))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(WSpace {
        k,
        s: matrix(&x_emb, |e| e.x),
        f: matrix(&z_iso, |e| e.z),
        z_embeds: matrix(&z_emb, |e| e.z),
        entries,
        images,
    })
}

/// Oracle results for one ordered pair of entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairAudit {
    pub i: usize,
    pub j: usize,
    pub s: bool,
    pub f: bool,
    pub z_embeds: bool,
    pub image_embeds: bool,
    pub image_iso: bool,
    /// Every witness found maps each part into the matching part.
    pub respects_parts: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WAudit {
    pub pairs: Vec<PairAudit>,
    /// Distinct entries with equal images.
    pub collisions: Vec<(usize, usize)>,
}

impl WAudit {
    /// `S ⟹` image embedding, restricted to pairs whose z-parts embed.
    pub fn s_forward_failures(&self) -> Vec<&PairAudit> {
        self.pairs.iter().filter(|p| p.s && p.z_embeds && !p.image_embeds).collect()
    }

    /// Image embedding `⟹ S`.
    pub fn s_backward_failures(&self) -> Vec<&PairAudit> {
        self.pairs.iter().filter(|p| p.image_embeds && !p.s).collect()
    }

    pub fn f_failures(&self) -> Vec<&PairAudit> {
        self.pairs.iter().filter(|p| p.f != p.image_iso).collect()
    }

    pub fn part_failures(&self) -> Vec<&PairAudit> {
        self.pairs.iter().filter(|p| !p.respects_parts).collect()
    }
}

fn respects_parts(a: &Structure, b: &Structure, w: &MorphismWitness) -> bool {
    let (ai, ar) = split_parts(a);
    let (bi, br) = split_parts(b);
    let inside = |from: &Structure, to: &Structure| {
        from.domain().iter().all(|l| w.apply(*l).is_some_and(|m| to.domain().contains(&m)))
    };
    inside(&ai, &bi) && inside(&ar, &br)
}

/// Runs the embedding and isomorphism oracles on every ordered pair of
/// images.
pub fn audit_w(w: &WSpace) -> Result<WAudit, SumError> {
    let n = w.entries.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let pairs = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&w.images[i], &w.images[j]);
            let emb = search(a, b, MorphKind::Embedding)?;
            let iso = search(a, b, MorphKind::Isomorphism)?;
            let respects = emb.iter().chain(iso.iter()).all(|wit| respects_parts(a, b, wit));
            Ok(PairAudit {
                i,
                j,
                s: w.s[i][j],
                f: w.f[i][j],
                z_embeds: w.z_embeds[i][j],
                image_embeds: emb.is_some(),
                image_iso: iso.is_some(),
                respects_parts: respects,
            })
        })
        .collect::<Result<Vec<_>, SumError>>()?;
    let mut collisions = Vec::new();
    let mut seen: HashMap<&Structure, usize> = HashMap::new();
    for (i, img) in w.images.iter().enumerate() {
        if let Some(&j) = seen.get(img) {
            collisions.push((j, i));
        } else {
            seen.insert(img, i);
        }
    }
    Ok(WAudit { pairs, collisions })
}
