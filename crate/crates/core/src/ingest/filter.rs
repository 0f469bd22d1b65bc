use super::lang::{LanguageDetector, LanguageVerdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct FilterCounts {
    pub input: u64,
    pub kept: u64,
    pub dropped: u64,
}

/// Iterator adapter passing items whose text is English with confidence at
/// or above the threshold. Kept items carry their verdict.
pub struct FilterEnglish<'d, I, F> {
    inner: I,
    detector: &'d dyn LanguageDetector,
    text_of: F,
    threshold: f64,
    counts: FilterCounts,
}

/// Panics if `threshold` is outside `(0, 1]`.
pub fn filter_english<'d, I, T, F>(
    items: I,
    detector: &'d dyn LanguageDetector,
    threshold: f64,
    text_of: F,
) -> FilterEnglish<'d, I::IntoIter, F>
where
    I: IntoIterator<Item = T>,
    F: FnMut(&T) -> String,
{
    assert!(
        threshold > 0.0 && threshold <= 1.0,
        "language threshold must be in (0, 1], got {threshold}"
    );
    FilterEnglish {
        inner: items.into_iter(),
        detector,
        text_of,
        threshold,
        counts: FilterCounts::default(),
    }
}

impl<I, F> FilterEnglish<'_, I, F> {
    pub fn counts(&self) -> FilterCounts {
        self.counts
    }
}

/// True when the verdict is English at or above `threshold`.
pub fn admits(verdict: &LanguageVerdict, threshold: f64) -> bool {
    verdict.is_english() && verdict.confidence >= threshold
}

impl<I, T, F> Iterator for FilterEnglish<'_, I, F>
where
    I: Iterator<Item = T>,
    F: FnMut(&T) -> String,
{
    type Item = (T, LanguageVerdict);

    fn next(&mut self) -> Option<Self::Item> {
        for item in self.inner.by_ref() {
            self.counts.input += 1;
            let verdict = self.detector.detect(&(self.text_of)(&item));
            if admits(&verdict, self.threshold) {
                self.counts.kept += 1;
                return Some((item, verdict));
            }
            self.counts.dropped += 1;
        }
        None
    }
}
