"""Speech-attribute benchmark toolkit: emotion, gender and age from voice.

Subpackages:
    dsp      -- WAV ingestion, augmentation transforms, ZCR/RMSE/MFCC features
    data     -- corpus adapters, label schema, dataset assembly, feature store
    nn       -- minimal numpy layer kernel with reverse-mode gradients
    optim    -- SGD/Adam/Nadam and training-control callbacks
    models   -- declarative builders for the five architectures and cascades
    harness  -- training loops, evaluation metrics, experiment matrix, reports
    config   -- defaults, JSON overlay loading, run-spec parsing
    cli      -- the `segaa` command line (build/train/eval/compare/predict)
"""

__version__ = "0.1.0"
