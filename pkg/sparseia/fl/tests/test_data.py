# coding: utf-8
from __future__ import print_function, division, unicode_literals, absolute_import

import numpy as np

from monty.io import zopen
from monty.tempfile import ScratchDir

from sparseia.core.testing import SparseiaTest
from sparseia.core.errors import (ContractViolationError, DataFileError, BadMagicError, TruncatedFileError,
                                  CountMismatchError, LabelValueError)
from sparseia.fl.data import (Dataset, load_mnist, find_mnist_files, load_mnist_dir, partition, synthetic_dataset,
                              synthetic_split, IMAGES_MAGIC, LABELS_MAGIC)


def write_idx(path, magic, dims, data, extra=b''):
    header = np.array([magic] + list(dims), dtype='>u4').tobytes()
    with zopen(path, 'wb') as f:
        f.write(header + np.asarray(data, dtype=np.uint8).tobytes() + extra)


def write_mnist_pair(prefix, n=5, rows=2, cols=3, labels=None, gz=False):
    suffix = '.gz' if gz else ''
    images_path = '{}-images-idx3-ubyte{}'.format(prefix, suffix)
    labels_path = '{}-labels-idx1-ubyte{}'.format(prefix, suffix)
    pixels = np.arange(n * rows * cols) % 256
    labels = np.arange(n) % 10 if labels is None else labels
    write_idx(images_path, IMAGES_MAGIC, [n, rows, cols], pixels)
    write_idx(labels_path, LABELS_MAGIC, [len(labels)], labels)
    return images_path, labels_path


class TestLoadMnist(SparseiaTest):

    def test_load(self):
        with ScratchDir("."):
            images, labels = write_mnist_pair('train')
            data = load_mnist(images, labels)
            self.assertEqual(len(data), 5)
            self.assertEqual(data.n_features, 6)
            self.assertArrayEqual(data.y, [0, 1, 2, 3, 4])
            self.assertArrayAlmostEqual(data.x[1], np.arange(6, 12) / 255.0)
            self.assertTrue(np.all((data.x >= 0) & (data.x <= 1)))

    def test_load_gzip_dir(self):
        with ScratchDir("."):
            write_mnist_pair('train', n=8, gz=True)
            write_mnist_pair('t10k', n=3)
            self.assertEqual(find_mnist_files('.', 'train'), ('./train-images-idx3-ubyte.gz',
                                                              './train-labels-idx1-ubyte.gz'))
            train, test = load_mnist_dir('.')
            self.assertEqual((len(train), len(test)), (8, 3))
            self.assertEqual(test.role, 'test')

    def test_missing(self):
        with ScratchDir("."):
            with self.assertRaises(DataFileError):
                load_mnist('nofile', 'nofile')
            with self.assertRaises(DataFileError):
                load_mnist_dir('nodir')
            write_mnist_pair('train')
            with self.assertRaises(DataFileError):
                load_mnist_dir('.')

    def test_truncated(self):
        with ScratchDir("."):
            images, labels = write_mnist_pair('train')
            with open(images, 'rb') as f:
                content = f.read()
            with open(images, 'wb') as f:
                f.write(content[:-1])
            with self.assertRaises(TruncatedFileError):
                load_mnist(images, labels)
            with open(images, 'wb') as f:
                f.write(content[:10])
            with self.assertRaises(TruncatedFileError):
                load_mnist(images, labels)

    def test_bad_magic(self):
        with ScratchDir("."):
            images, labels = write_mnist_pair('train')
            with self.assertRaises(BadMagicError):
                load_mnist(labels, images)

    def test_count_mismatch(self):
        with ScratchDir("."):
            images, _ = write_mnist_pair('train', n=5)
            write_idx('short-labels', LABELS_MAGIC, [4], np.zeros(4))
            with self.assertRaises(CountMismatchError):
                load_mnist(images, 'short-labels')
            write_idx('long-labels', LABELS_MAGIC, [5], np.zeros(5), extra=b'\x01')
            with self.assertRaises(CountMismatchError):
                load_mnist(images, 'long-labels')

    def test_label_value(self):
        with ScratchDir("."):
            images, labels = write_mnist_pair('train', labels=[0, 1, 10, 2, 3])
            with self.assertRaises(LabelValueError):
                load_mnist(images, labels)


class TestPartition(SparseiaTest):

    def setUp(self):
        n = 23
        # the first feature identifies the sample
        self.data = Dataset(np.column_stack([np.arange(n), np.zeros(n)]), np.arange(n) % 3, n_classes=3)

    def ids(self, part):
        return part.x[:, 0].astype(int).tolist()

    def test_partition(self):
        parts = partition(self.data, 5, seed=4)
        sizes = [len(p) for p in parts]
        self.assertEqual(sum(sizes), 23)
        self.assertLessEqual(max(sizes) - min(sizes), 1)
        all_ids = sum((self.ids(p) for p in parts), [])
        self.assertEqual(sorted(all_ids), list(range(23)))

        same = partition(self.data, 5, seed=4)
        self.assertEqual([self.ids(p) for p in parts], [self.ids(p) for p in same])
        other = partition(self.data, 5, seed=5)
        self.assertNotEqual([self.ids(p) for p in parts], [self.ids(p) for p in other])

    def test_limits(self):
        (single,) = partition(self.data, 1, seed=0)
        self.assertEqual(sorted(self.ids(single)), list(range(23)))
        parts = partition(self.data, 23, seed=0)
        self.assertTrue(all(len(p) == 1 for p in parts))

        with self.assertRaises(ContractViolationError):
            partition(self.data, 0, seed=0)
        with self.assertRaises(ContractViolationError):
            partition(self.data, 24, seed=0)

    def test_non_iid(self):
        parts = partition(self.data, 3, seed=2, iid=False)
        labels = np.concatenate([p.y for p in parts])
        self.assertTrue(np.all(np.diff(labels) >= 0))
        self.assertEqual([set(p.y.tolist()) for p in parts], [{0}, {1}, {2}])


class TestSynthetic(SparseiaTest):

    def test_synthetic_dataset(self):
        data = synthetic_dataset(50, features=7, classes=5, seed=3)
        self.assertEqual(data.x.shape, (50, 7))
        self.assertTrue(np.all((data.x >= 0) & (data.x <= 1)))
        self.assertArrayEqual(np.bincount(data.y), [10] * 5)

        again = synthetic_dataset(50, features=7, classes=5, seed=3)
        self.assertEqual(data.x.tobytes(), again.x.tobytes())
        self.assertEqual(data.y.tobytes(), again.y.tobytes())

        self.assertEqual(len(synthetic_dataset(0, features=7, classes=5)), 0)

    def test_synthetic_split(self):
        train, test = synthetic_split(400, 200, features=6, classes=4, seed=1, noise=0.1)
        self.assertEqual((len(train), len(test)), (400, 200))
        self.assertEqual((train.role, test.role), ('train', 'test'))
        self.assertFalse(np.array_equal(train.x[:200], test.x))
        # same centers: the class means of the two sets are close
        for c in range(4):
            self.assertLess(np.abs(train.x[train.y == c].mean(axis=0) - test.x[test.y == c].mean(axis=0)).max(), 0.1)
