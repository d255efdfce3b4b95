use std::fmt;
use std::str::FromStr;

/// Number of mood dimensions carried by every vector and series.
pub const DIMENSIONS: usize = 6;

/// One of the six mood dimensions.
///
/// The declaration order is the vector index order used everywhere
/// (Tension = 1 ... Confusion = 6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoodDimension {
    Tension,
    Depression,
    Anger,
    Vigour,
    Fatigue,
    Confusion,
}

impl MoodDimension {
    pub const ALL: [MoodDimension; DIMENSIONS] = [
        MoodDimension::Tension,
        MoodDimension::Depression,
        MoodDimension::Anger,
        MoodDimension::Vigour,
        MoodDimension::Fatigue,
        MoodDimension::Confusion,
    ];

    /// Zero-based position in a mood vector.
    pub fn position(self) -> usize {
        self as usize
    }

    /// One-based index (Tension = 1).
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_position(position: usize) -> Option<Self> {
        Self::ALL.get(position).copied()
    }

    /// Lowercase label used in files and report headers.
    pub fn label(self) -> &'static str {
        match self {
            MoodDimension::Tension => "tension",
            MoodDimension::Depression => "depression",
            MoodDimension::Anger => "anger",
            MoodDimension::Vigour => "vigour",
            MoodDimension::Fatigue => "fatigue",
            MoodDimension::Confusion => "confusion",
        }
    }
}

impl fmt::Display for MoodDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownDimension(pub String);

impl fmt::Display for UnknownDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown mood dimension `{}`", self.0)
    }
}

impl std::error::Error for UnknownDimension {}

impl FromStr for MoodDimension {
    type Err = UnknownDimension;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tension" => Ok(MoodDimension::Tension),
            "depression" => Ok(MoodDimension::Depression),
            "anger" => Ok(MoodDimension::Anger),
            // American spelling is common in POMS literature.
            "vigour" | "vigor" => Ok(MoodDimension::Vigour),
            "fatigue" => Ok(MoodDimension::Fatigue),
            "confusion" => Ok(MoodDimension::Confusion),
            _ => Err(UnknownDimension(s.trim().to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_order_is_fixed() {
        let idx: Vec<usize> = MoodDimension::ALL.iter().map(|d| d.index()).collect();
        assert_eq!(idx, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(MoodDimension::Tension.index(), 1);
        assert_eq!(MoodDimension::Confusion.index(), 6);
    }

    #[test]
    fn labels_round_trip() {
        for d in MoodDimension::ALL {
            assert_eq!(d.label().parse::<MoodDimension>().unwrap(), d);
        }
        assert_eq!("Vigor".parse::<MoodDimension>().unwrap(), MoodDimension::Vigour);
        assert!("joy".parse::<MoodDimension>().is_err());
    }
}
