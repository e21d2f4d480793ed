use thiserror::Error;

/// Rejected posit configurations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("unsupported posit size {0} (expected 8, 16 or 32)")]
    UnsupportedSize(u32),
    #[error("es={es} leaves no room for the regime in a {ps}-bit posit")]
    EsTooLarge { ps: u32, es: u32 },
    #[error("the dual-es datapath is 32 bits wide, got ps={0}")]
    DualWidth(u32),
    #[error("es={0} is not selectable on the dual-es datapath (only 2 or 3)")]
    DualEs(u32),
}
