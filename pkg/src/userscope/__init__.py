"""userscope: retweet-graph sampling, belief diffusion, stratified
annotation and group characterization for user-level network studies."""

__version__ = "0.1.0"
