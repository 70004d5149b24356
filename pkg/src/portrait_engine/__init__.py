"""Engine for topical user characterization, opposing-view recommendation,
and organic data-portrait layouts over a microblog corpus."""

__version__ = "0.1.0"
