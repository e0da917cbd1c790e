"""Segment-distribution pupil features for cognitive load estimation."""

__version__ = "0.1.0"

from .distfit import (BetaParams, DegenerateSegmentError, Histogram, NormalParams, beta_std,
                      dist_bin_masses, fit_beta, fit_normal, histogram, l1_fit_error,
                      regularized_incomplete_beta)
from .features import (BaselinePupilStats, FeatureVector, SegmentDistributionFeatures,
                       baseline_pupil_stats, extract_feature, normalize_minmax,
                       squeeze_unit_interval)
from .ingest import (CLASSES, DatasetManifest, EmptyRecordingError, ManifestEntry, Recording,
                     RecordingError, TlxLabel, bin_class, filter_confidence, load_dataset,
                     load_recording, read_manifest, split_train_test, write_manifest,
                     write_recording)
from .learn import (fit_classifier, fit_regressor_nn, load_model, make_classifier, predict,
                    predict_reg, save_model)
from .metrics import ClassificationScores, classification_metrics, confusion_matrix, mae
from .segmentation import (SparseSegmentError, Window, best_split_count, estimate_splits,
                           segment_fit_cost, uniform_segments, window_count, window_dataset,
                           window_recording)
from .synth import SynthSpec, generate_dataset, generate_recording

__all__ = [n for n in dir() if not n.startswith("_")]
