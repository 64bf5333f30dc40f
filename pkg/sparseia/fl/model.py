# coding: utf-8
"""
Multinomial logistic regression on a flat parameter vector.
"""
import logging

import numpy as np

from sparseia.core.errors import ContractViolationError


logger = logging.getLogger(__name__)


class LogisticRegression(object):
    """
    Softmax classifier with cross-entropy loss.

    The parameters are stored in a single vector w of dimension n_features * n_classes + n_classes:
    the weight matrix of shape (n_features, n_classes) flattened row by row, followed by the biases.
    With the default 784 features and 10 classes the dimension is 7850.
    """

    def __init__(self, n_features=784, n_classes=10):
        if n_features < 1 or n_classes < 2:
            raise ContractViolationError("Invalid model shape: {} features, {} classes".format(
                n_features, n_classes))
        self.n_features = n_features
        self.n_classes = n_classes

    @property
    def dim(self):
        return self.n_features * self.n_classes + self.n_classes

    def init_weights(self):
        """All-zero initial model."""
        return np.zeros(self.dim)

    def unpack(self, w):
        """Views of the weight matrix and of the biases contained in w."""
        w = np.asarray(w, dtype=float)
        if w.shape != (self.dim,):
            raise ContractViolationError("Expected a parameter vector of dimension {}, got shape {}".format(
                self.dim, w.shape))
        nw = self.n_features * self.n_classes
        return w[:nw].reshape(self.n_features, self.n_classes), w[nw:]

    def logits(self, w, x):
        weights, biases = self.unpack(w)
        return np.asarray(x, dtype=float) @ weights + biases

    def _log_softmax(self, logits):
        shifted = logits - logits.max(axis=1, keepdims=True)
        return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))

    def loss(self, w, x, y):
        """Mean cross-entropy loss over the samples."""
        return self.loss_and_grad(w, x, y)[0]

    def loss_and_grad(self, w, x, y):
        """
        Mean cross-entropy loss and its gradient with respect to w.

        Args:
            w: parameter vector.
            x: features, shape (n, n_features).
            y: integer labels, shape (n,).
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        if n == 0:
            raise ContractViolationError("Cannot compute the loss on an empty batch")
        log_p = self._log_softmax(self.logits(w, x))
        loss = -float(log_p[np.arange(n), y].mean())

        delta = np.exp(log_p)
        delta[np.arange(n), y] -= 1.0
        delta /= n
        grad_w = x.T @ delta
        grad_b = delta.sum(axis=0)
        return loss, np.concatenate([grad_w.reshape(-1), grad_b])

    def predict(self, w, x):
        """Predicted classes. np.argmax returns the lowest class index in case of ties."""
        return np.argmax(self.logits(w, x), axis=1)
