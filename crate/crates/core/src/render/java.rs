//! Java: the generic renderers unchanged.

use super::{generic, Dialect, RenderConfig};

pub fn config() -> RenderConfig {
    generic::config(Dialect::Java)
}
