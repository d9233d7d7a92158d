from .cluster import KMeansResult, kmeans2
from .stats import MmdResult, accuracy, kfold_accuracy, mmd2_test, mmd2_unbiased, zscore
from .svm import SvmModel, rbf_kernel, svm_predict, svm_train

__all__ = [
    "KMeansResult",
    "MmdResult",
    "SvmModel",
    "accuracy",
    "kfold_accuracy",
    "kmeans2",
    "mmd2_test",
    "mmd2_unbiased",
    "rbf_kernel",
    "svm_predict",
    "svm_train",
    "zscore",
]
