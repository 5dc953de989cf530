"""emoface: text-driven facial expression transfer.

Pipeline: normalize text, classify its emotion with a recurrent model,
map the emotion to a face expression domain, and re-synthesize a prepared
face with that expression using a multi-domain adversarial generator.
"""

__version__ = "0.1.0"

from .labels import EmotionLabel, ExpressionDomain

__all__ = ["EmotionLabel", "ExpressionDomain", "__version__"]
