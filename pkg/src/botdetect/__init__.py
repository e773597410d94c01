"""Twitter bot detection at the account and single-tweet level.

Library layout:

- ``data``: shared domain types, encodings, seeded splits
- ``ingest``: corpus loading and synthetic corpus generation
- ``tokenizer`` / ``embedding``: tweet preprocessing and frozen word vectors
- ``resample``: SMOTE, ENN, Tomek links, and their combinations
- ``baselines``: five classical classifiers, from scratch
- ``nnet``: the contextual LSTM and its tweet-only variant
- ``metrics``: precision/recall/F1/accuracy and ROC/AUC
- ``introspect``: hidden-state traces and per-unit distributions
- ``cli``: the ``botdetect`` command
"""

__version__ = "0.1.0"
