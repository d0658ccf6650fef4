//! Normalized text, Vigenère encryption, and coset partitions.

use std::fmt;

use crate::error::{Error, Result};

/// Text reduced to the 26-letter uppercase alphabet, stored as codes 0..=25.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedText {
    letters: Vec<u8>,
}

impl NormalizedText {
    /// Keeps exactly the ASCII-alphabetic characters of `raw`, uppercased and in
    /// order; digits, punctuation, whitespace, and accented letters are dropped.
    pub fn normalize(raw: &str) -> Self {
        let letters = raw
            .bytes()
            .filter(u8::is_ascii_alphabetic)
            .map(|b| b.to_ascii_uppercase() - b'A')
            .collect();
        Self { letters }
    }

    /// Builds a text from letter codes, rejecting anything outside 0..=25.
    pub fn from_letters(letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l > 25) {
            return Err(Error::LetterOutOfRange(bad));
        }
        Ok(Self { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter codes in 0..=25, one per position.
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// A length-`n` slice starting at 0-based `offset`, as its own text.
    pub fn slice(&self, offset: usize, n: usize) -> Self {
        Self {
            letters: self.letters[offset..offset + n].to_vec(),
        }
    }
}

impl fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", (b'A' + l) as char)?;
        }
        Ok(())
    }
}

/// Nonempty sequence of shifts in 0..=25; the key length k is its length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VigenereKey {
    shifts: Vec<u8>,
}

impl VigenereKey {
    /// Key from a keyword: letters are normalized, A meaning shift 0.
    pub fn from_word(word: &str) -> Result<Self> {
        Self::from_shifts(NormalizedText::normalize(word).letters.clone())
    }

    pub fn from_shifts(shifts: Vec<u8>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::EmptyKey);
        }
        if let Some(&bad) = shifts.iter().find(|&&s| s > 25) {
            return Err(Error::ShiftOutOfRange(bad));
        }
        Ok(Self { shifts })
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shifts(&self) -> &[u8] {
        &self.shifts
    }

    /// Smallest p dividing the key length such that the key is the length-p
    /// prefix repeated; "ABAB" has minimal period 2, "WILL" has 4.
    pub fn minimal_period(&self) -> usize {
        let k = self.shifts.len();
        (1..=k)
            .filter(|&p| k.is_multiple_of(p))
            .find(|&p| {
                self.shifts
                    .iter()
                    .enumerate()
                    .all(|(i, &s)| s == self.shifts[i % p])
            })
            .unwrap_or(k)
    }
}

impl fmt::Display for VigenereKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.shifts {
            write!(f, "{}", (b'A' + s) as char)?;
        }
        Ok(())
    }
}

/// `cipher[i] = plain[i] + key[i mod k]` (mod 26).
pub fn vigenere_encrypt(plain: &NormalizedText, key: &VigenereKey) -> NormalizedText {
    let k = key.shifts.len();
    let letters = plain
        .letters
        .iter()
        .enumerate()
        .map(|(i, &l)| (l + key.shifts[i % k]) % 26)
        .collect();
    NormalizedText { letters }
}

/// Inverse of [`vigenere_encrypt`] under the same key.
pub fn vigenere_decrypt(cipher: &NormalizedText, key: &VigenereKey) -> NormalizedText {
    let k = key.shifts.len();
    let letters = cipher
        .letters
        .iter()
        .enumerate()
        .map(|(i, &l)| (l + 26 - key.shifts[i % k]) % 26)
        .collect();
    NormalizedText { letters }
}

/// The m cosets of a text: coset j (1-based) holds the letters at 1-based
/// positions i with i ≡ j (mod m), positions with i ≡ 0 landing in coset m.
/// Equivalently, coset j collects 0-based indices ≡ j-1 (mod m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    m: usize,
    cosets: Vec<Vec<u8>>,
}

impl CosetPartition {
    pub fn modulus(&self) -> usize {
        self.m
    }

    /// Cosets in j order; `cosets()[0]` is coset 1.
    pub fn cosets(&self) -> &[Vec<u8>] {
        &self.cosets
    }

    /// Coset by 1-based class index j in 1..=m.
    pub fn coset(&self, j: usize) -> &[u8] {
        &self.cosets[j - 1]
    }
}

/// Splits a text into m cosets by position mod m. Needs 1 <= m <= N.
pub fn partition_cosets(text: &NormalizedText, m: usize) -> Result<CosetPartition> {
    let n = text.len();
    if m < 1 || m > n {
        return Err(Error::ModulusOutOfRange { m, n });
    }
    let mut cosets = vec![Vec::with_capacity(n / m + 1); m];
    for (idx, &l) in text.letters.iter().enumerate() {
        cosets[idx % m].push(l);
    }
    Ok(CosetPartition { m, cosets })
}

/// Per-coset letter counts: out[j-1][c] counts letter c in coset j. Same
/// partition as [`partition_cosets`] but skips materializing the cosets.
pub(crate) fn coset_letter_counts(text: &NormalizedText, m: usize) -> Result<Vec<[u32; 26]>> {
    let n = text.len();
    if m < 1 || m > n {
        return Err(Error::ModulusOutOfRange { m, n });
    }
    let mut counts = vec![[0u32; 26]; m];
    for (idx, &l) in text.letters.iter().enumerate() {
        counts[idx % m][l as usize] += 1;
    }
    Ok(counts)
}
