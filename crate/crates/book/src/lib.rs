//! The guide's chapters, compiled so every listing runs as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/syntax.md")]
pub mod syntax {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/runtime.md")]
pub mod runtime {}

#[doc = include_str!("../../../book/src/codegen.md")]
pub mod codegen {}

#[doc = include_str!("../../../book/src/rendering.md")]
pub mod rendering {}

#[doc = include_str!("../../../book/src/export.md")]
pub mod export {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
