# coding: utf-8
"""
Datasets used by the federated simulation: MNIST files in IDX format, synthetic Gaussian blobs and the
partitioning of a training set among the clients.
"""
import logging
import os

import numpy as np

from monty.io import zopen

from sparseia.core.errors import (ContractViolationError, DataFileError, BadMagicError, TruncatedFileError,
                                  CountMismatchError, LabelValueError)


logger = logging.getLogger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

MNIST_FILES = {
    'train': ('train-images-idx3-ubyte', 'train-labels-idx1-ubyte'),
    'test': ('t10k-images-idx3-ubyte', 't10k-labels-idx1-ubyte'),
}


class Dataset(object):
    """
    Feature vectors with integer labels.

    Args:
        x: features, shape (n, n_features).
        y: labels in 0..n_classes-1, shape (n,).
        role: 'train' or 'test', informative only.
    """

    def __init__(self, x, y, n_classes=10, role='train'):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        if x.ndim != 2:
            raise ContractViolationError("Features should be a 2D array, got shape {}".format(x.shape))
        if len(x) != len(y):
            raise ContractViolationError("Got {} feature vectors and {} labels".format(len(x), len(y)))
        if len(y) and (y.min() < 0 or y.max() >= n_classes):
            raise ContractViolationError("Labels should be in 0..{}".format(n_classes - 1))
        self.x = x
        self.y = y
        self.n_classes = n_classes
        self.role = role

    def __len__(self):
        return len(self.y)

    @property
    def n_features(self):
        return self.x.shape[1]

    def subset(self, indices, role=None):
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.x[indices], self.y[indices], n_classes=self.n_classes, role=role or self.role)

    def __repr__(self):
        return "Dataset(role={}, samples={}, features={})".format(self.role, len(self), self.n_features)


def _read_idx(path, magic, n_dims):
    """
    Reads an IDX file with unsigned byte data, plain or gzipped.

    Returns:
        (list of the dimensions in the header, numpy array of the data)
    """
    if not os.path.isfile(path):
        raise DataFileError("File {} does not exist".format(path))
    with zopen(path, 'rb') as f:
        content = f.read()

    if len(content) < 4:
        raise TruncatedFileError("File {} is too short to contain an IDX magic number".format(path))
    found = int(np.frombuffer(content[:4], dtype='>u4')[0])
    if found != magic:
        raise BadMagicError("File {} has magic number 0x{:08x}, expected 0x{:08x}".format(path, found, magic))
    header_size = 4 * (1 + n_dims)
    if len(content) < header_size:
        raise TruncatedFileError("File {} is too short to contain an IDX header".format(path))
    dims = [int(i) for i in np.frombuffer(content[4:header_size], dtype='>u4')]
    expected = int(np.prod(dims))
    data = np.frombuffer(content[header_size:], dtype=np.uint8)
    if len(data) < expected:
        raise TruncatedFileError("File {} contains {} data bytes, {} declared in the header".format(
            path, len(data), expected))
    if len(data) > expected:
        raise CountMismatchError("File {} contains {} data bytes, only {} declared in the header".format(
            path, len(data), expected))
    return dims, data


def load_mnist(images_path, labels_path, role='train'):
    """
    Loads a MNIST image and label file pair in IDX format. Files ending with .gz are decompressed.
    Pixels are scaled to [0, 1].
    """
    (n_images, rows, cols), pixels = _read_idx(images_path, IMAGES_MAGIC, 3)
    (n_labels,), labels = _read_idx(labels_path, LABELS_MAGIC, 1)
    if n_images != n_labels:
        raise CountMismatchError("{} images in {} but {} labels in {}".format(
            n_images, images_path, n_labels, labels_path))
    if n_labels and labels.max() > 9:
        raise LabelValueError("Label {} in {} is outside the range 0..9".format(int(labels.max()), labels_path))

    x = pixels.reshape(n_images, rows * cols).astype(float) / 255.0
    logger.info("Loaded {} {} samples of dimension {} from {}".format(n_images, role, rows * cols, images_path))
    return Dataset(x, labels.astype(np.int64), n_classes=10, role=role)


def find_mnist_files(mnist_dir, role='train'):
    """
    Paths of the images and labels files of the requested role in mnist_dir,
    accepting both the plain and the gzipped versions.
    """
    paths = []
    for basename in MNIST_FILES[role]:
        for candidate in (basename, basename + '.gz', basename.replace('-idx', '.idx')):
            path = os.path.join(mnist_dir, candidate)
            if os.path.isfile(path):
                paths.append(path)
                break
        else:
            raise DataFileError("Cannot find {} (or {}.gz) in {}".format(basename, basename, mnist_dir))
    return tuple(paths)


def load_mnist_dir(mnist_dir):
    """Train and test MNIST datasets contained in mnist_dir."""
    if not mnist_dir or not os.path.isdir(mnist_dir):
        raise DataFileError("MNIST directory {} does not exist".format(mnist_dir))
    train = load_mnist(*find_mnist_files(mnist_dir, 'train'), role='train')
    test = load_mnist(*find_mnist_files(mnist_dir, 'test'), role='test')
    return train, test


def partition(train, k, seed, iid=True):
    """
    Splits the training set among k clients: seeded shuffle followed by a contiguous split in k parts whose
    sizes differ by at most one. With iid=False the shuffled samples are sorted by label before splitting,
    so that each client holds only a few classes.
    """
    n = len(train)
    if k < 1:
        raise ContractViolationError("The number of clients should be >= 1, got {}".format(k))
    if k > n:
        raise ContractViolationError("Cannot split {} samples among {} clients".format(n, k))
    perm = np.random.default_rng(seed).permutation(n)
    if not iid:
        perm = perm[np.argsort(train.y[perm], kind='stable')]
    return [train.subset(idx) for idx in np.array_split(perm, k)]


def synthetic_dataset(n, features=784, classes=10, seed=0, noise=0.5, role='train'):
    """
    Gaussian class-conditional blobs with features clipped to [0, 1].
    The class centers are drawn uniformly in the unit cube and the classes are balanced.
    Use synthetic_split to get train and test sets sharing the same centers.
    """
    return _synthetic(n, features, classes, seed, seed, noise, role)


def _synthetic(n, features, classes, center_seed, sample_seed, noise, role):
    centers = np.random.default_rng(center_seed).random((classes, features))
    rng = np.random.default_rng([sample_seed, n])
    y = rng.permutation(np.arange(n) % classes)
    x = np.clip(centers[y] + noise * rng.standard_normal((n, features)), 0.0, 1.0)
    return Dataset(x.reshape(n, features), y, n_classes=classes, role=role)


def synthetic_split(n_train, n_test, features=784, classes=10, seed=0, noise=0.5):
    """Train and test sets drawn from the same synthetic distribution with independent samples."""
    train = _synthetic(n_train, features, classes, seed, 2 * seed, noise, 'train')
    test = _synthetic(n_test, features, classes, seed, 2 * seed + 1, noise, 'test')
    return train, test
