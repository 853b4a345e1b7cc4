#ifndef VERITY_H
#define VERITY_H

/* This file is generated by cbindgen from verity-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum VerityStatus {
  VERITY_STATUS_OK = 0,
  // A required pointer argument was NULL.
  VERITY_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  VERITY_STATUS_INVALID_UTF8 = 2,
  // File system error (path in the error message).
  VERITY_STATUS_IO = 3,
  // A file did not match its declared format.
  VERITY_STATUS_PARSE = 4,
  // Input data violated a contract (labels, finiteness, ...).
  VERITY_STATUS_VALIDATION = 5,
  // Bad or incomplete configuration.
  VERITY_STATUS_CONFIG = 6,
  // Dimension or layout mismatch.
  VERITY_STATUS_SHAPE = 7,
  // An internal panic was caught at the boundary.
  VERITY_STATUS_PANIC = 8,
} VerityStatus;

// A loaded model with everything needed to score raw documents.
typedef struct VerityClassifier VerityClassifier;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *verity_version(void);

// Copies the current thread's last error message into `buf` (up to
// `cap - 1` bytes plus a NUL terminator) and returns the full message
// length in bytes. With a NULL `buf` or zero `cap` nothing is written,
// so the return value can size a buffer.
//
// # Safety
// `buf` must be NULL or point to at least `cap` writable bytes.
size_t verity_last_error_message(char *buf, size_t cap);

// Loads a classifier from a run-configuration file naming the model,
// vocabulary and lexicon paths. On success writes a handle to `out`;
// release it with [`verity_classifier_free`].
//
// # Safety
// `config_path` must be a valid NUL-terminated string and `out` a
// valid pointer.
enum VerityStatus verity_classifier_load(const char *config_path, struct VerityClassifier **out);

// Releases a classifier handle. NULL is a no-op.
//
// # Safety
// `classifier` must be NULL or a handle from
// [`verity_classifier_load`] that has not been freed yet.
void verity_classifier_free(struct VerityClassifier *classifier);

// Total feature dimension of the loaded model, 0 for NULL handles.
//
// # Safety
// `classifier` must be NULL or a live handle.
size_t verity_classifier_feature_dim(const struct VerityClassifier *classifier);

// Probability that the document is fake, in [0, 1]. An empty title is
// allowed (pass "" rather than NULL).
//
// # Safety
// `classifier` must be a live handle; `title` and `body` valid
// NUL-terminated strings; `out_probability` a valid pointer.
enum VerityStatus verity_classifier_predict_proba(const struct VerityClassifier *classifier,
                                                  const char *title,
                                                  const char *body,
                                                  double *out_probability);

// Predicted label: 1 for fake, 0 for credible (ties go to fake).
//
// # Safety
// As for [`verity_classifier_predict_proba`].
enum VerityStatus verity_classifier_predict(const struct VerityClassifier *classifier,
                                            const char *title,
                                            const char *body,
                                            int *out_label);

// Computes the 20 canonical credibility features of a document into
// `out_features` (canonical order, length 20), using the classifier's
// lexicons. Independent of the model's feature mask.
//
// # Safety
// `classifier` must be a live handle; `title` and `body` valid
// NUL-terminated strings; `out_features` must point to 20 doubles.
enum VerityStatus verity_classifier_credibility_features(const struct VerityClassifier *classifier,
                                                         const char *title,
                                                         const char *body,
                                                         double *out_features);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VERITY_H */
