//! Nominal datasets with a distinguished class attribute.
//!
//! Attribute values are encoded as indices in order of first appearance in
//! the input, so the same file always produces the same encoding. Datasets
//! are immutable after construction and safe to share across threads.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One nominal attribute: its name and the ordered list of observed values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub values: Vec<String>,
}

impl Attribute {
    pub fn new(name: impl Into<String>, values: Vec<String>) -> Self {
        Attribute {
            name: name.into(),
            values,
        }
    }

    /// Index of `value` within this attribute, if present.
    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

/// Schema of a dataset: the ordered attribute list and which one is the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSchema {
    attributes: Vec<Attribute>,
    class_index: usize,
}

impl AttributeSchema {
    /// Builds a schema, checking that attribute names are unique and each
    /// attribute's value list has no duplicates.
    pub fn new(attributes: Vec<Attribute>, class_index: usize) -> Result<Self> {
        if class_index >= attributes.len() {
            return Err(Error::Config(format!(
                "class index {} out of range for {} attributes",
                class_index,
                attributes.len()
            )));
        }
        for (i, a) in attributes.iter().enumerate() {
            if attributes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Config(format!(
                    "duplicate attribute name '{}'",
                    a.name
                )));
            }
            for (j, v) in a.values.iter().enumerate() {
                if a.values[..j].iter().any(|w| w == v) {
                    return Err(Error::Config(format!(
                        "duplicate value '{}' for attribute '{}'",
                        v, a.name
                    )));
                }
            }
        }
        Ok(AttributeSchema {
            attributes,
            class_index,
        })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    pub fn class_attribute(&self) -> &Attribute {
        &self.attributes[self.class_index]
    }

    /// Number of distinct class values observed in the data.
    pub fn num_classes(&self) -> usize {
        self.class_attribute().values.len()
    }

    pub fn value_name(&self, attribute: usize, value: usize) -> &str {
        &self.attributes[attribute].values[value]
    }

    pub fn class_value_name(&self, class: usize) -> &str {
        &self.class_attribute().values[class]
    }
}

/// An attribute-value pair used in rule antecedents.
///
/// `attribute` must never be the schema's class index; rule constructors
/// enforce this where it matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item {
    pub attribute: usize,
    pub value: usize,
}

impl Item {
    pub fn new(attribute: usize, value: usize) -> Self {
        Item { attribute, value }
    }

    pub fn matches(&self, instance: &Instance) -> bool {
        instance.value(self.attribute) == self.value
    }
}

/// One encoded row: a value index for every attribute, class included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    values: Vec<usize>,
}

impl Instance {
    pub fn new(values: Vec<usize>) -> Self {
        Instance { values }
    }

    pub fn value(&self, attribute: usize) -> usize {
        self.values[attribute]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// An immutable collection of instances conforming to one schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    schema: AttributeSchema,
    instances: Vec<Instance>,
}

impl Dataset {
    /// Builds a dataset, checking every instance against the schema.
    pub fn new(schema: AttributeSchema, instances: Vec<Instance>) -> Result<Self> {
        for (i, inst) in instances.iter().enumerate() {
            if inst.values().len() != schema.num_attributes() {
                return Err(Error::Input(format!(
                    "instance {} has {} values, schema has {} attributes",
                    i,
                    inst.values().len(),
                    schema.num_attributes()
                )));
            }
            for (a, &v) in inst.values().iter().enumerate() {
                if v >= schema.attribute(a).values.len() {
                    return Err(Error::Input(format!(
                        "instance {} value index {} out of range for attribute '{}'",
                        i,
                        v,
                        schema.attribute(a).name
                    )));
                }
            }
        }
        Ok(Dataset { schema, instances })
    }

    /// Parses comma-separated text with a header row. Cells are nominal
    /// tokens; no quoting or escaping is supported. `class_column` is
    /// matched against header names first, then taken as a 0-based column
    /// index if it parses as an integer.
    pub fn parse_csv(text: &str, class_column: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::EmptyDataset)?;
        let names: Vec<&str> = split_row(header);
        if names.is_empty() || names.iter().all(|n| n.is_empty()) {
            return Err(Error::Parse {
                line: 1,
                message: "empty header row".into(),
            });
        }

        let class_index = match names.iter().position(|n| *n == class_column) {
            Some(i) => i,
            None => match class_column.parse::<usize>() {
                Ok(i) if i < names.len() => i,
                _ => {
                    return Err(Error::Config(format!(
                        "class column '{}' not found among {:?}",
                        class_column, names
                    )))
                }
            },
        };

        let mut value_lists: Vec<Vec<String>> = vec![Vec::new(); names.len()];
        let mut value_maps: Vec<HashMap<String, usize>> = vec![HashMap::new(); names.len()];
        let mut instances = Vec::new();

        for (idx, line) in lines {
            let cells = split_row(line);
            if cells.len() != names.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {} cells, found {}", names.len(), cells.len()),
                });
            }
            let mut encoded = Vec::with_capacity(cells.len());
            for (col, cell) in cells.iter().enumerate() {
                let next = value_lists[col].len();
                let code = *value_maps[col].entry((*cell).to_string()).or_insert(next);
                if code == next {
                    value_lists[col].push((*cell).to_string());
                }
                encoded.push(code);
            }
            instances.push(Instance::new(encoded));
        }

        if instances.is_empty() {
            return Err(Error::EmptyDataset);
        }

        let attributes = names
            .into_iter()
            .zip(value_lists)
            .map(|(n, vs)| Attribute::new(n, vs))
            .collect();
        let schema = AttributeSchema::new(attributes, class_index)?;
        Dataset::new(schema, instances)
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Class value index of an instance.
    pub fn class_label(&self, instance: &Instance) -> usize {
        instance.value(self.schema.class_index)
    }

    /// Instance count per class value index.
    pub fn class_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.schema.num_classes()];
        for inst in &self.instances {
            counts[self.class_label(inst)] += 1;
        }
        counts
    }

    /// Decodes an instance back to its original token sequence.
    pub fn decode(&self, instance: &Instance) -> Vec<&str> {
        instance
            .values()
            .iter()
            .enumerate()
            .map(|(a, &v)| self.schema.value_name(a, v))
            .collect()
    }

    /// Class with the highest instance count; ties go to the lower value index.
    pub fn majority_class(&self) -> Result<usize> {
        if self.instances.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let counts = self.class_counts();
        let mut best = 0;
        for (c, &n) in counts.iter().enumerate() {
            if n > counts[best] {
                best = c;
            }
        }
        Ok(best)
    }

    /// Splits per class: each class contributes round(fraction * count)
    /// instances to the training side (half rounds up), chosen by a seeded
    /// shuffle. Both halves keep the original instance order and share this
    /// dataset's schema.
    pub fn split_stratified(&self, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        if !(train_fraction > 0.0 && train_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "train fraction {} outside (0, 1]",
                train_fraction
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); self.schema.num_classes()];
        for (i, inst) in self.instances.iter().enumerate() {
            by_class[self.class_label(inst)].push(i);
        }

        let mut train_idx = Vec::new();
        let mut test_idx = Vec::new();
        for mut indices in by_class {
            indices.shuffle(&mut rng);
            let take =
                ((train_fraction * indices.len() as f64).round() as usize).min(indices.len());
            train_idx.extend_from_slice(&indices[..take]);
            test_idx.extend_from_slice(&indices[take..]);
        }
        train_idx.sort_unstable();
        test_idx.sort_unstable();

        let pick = |idx: &[usize]| Dataset {
            schema: self.schema.clone(),
            instances: idx.iter().map(|&i| self.instances[i].clone()).collect(),
        };
        Ok((pick(&train_idx), pick(&test_idx)))
    }
}

fn split_row(line: &str) -> Vec<&str> {
    line.trim_end_matches('\r').split(',').collect()
}
