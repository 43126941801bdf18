"""Wiki engine for formal mathematics: proof scripts as frame/scene
documents, live prover sessions with memoized states, heuristic
hyperlinking, LaTeX-to-wiki conversion, and a parallel proof-advice
service."""

__version__ = "0.1.0"
