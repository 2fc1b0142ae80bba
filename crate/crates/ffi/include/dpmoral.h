#ifndef DPMORAL_H
#define DPMORAL_H

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum DpmPrivacyKind {
  // No noise. The output is not private.
  DPM_PRIVACY_KIND_NONE = 0,
  DPM_PRIVACY_KIND_UNIFORM = 1,
  DPM_PRIVACY_KIND_PERSONALIZED = 2,
} DpmPrivacyKind;

// Result of every fallible call.
typedef enum DpmStatus {
  DPM_STATUS_OK = 0,
  DPM_STATUS_NULL_POINTER = 1,
  // Bad parameter or configuration, including invalid ε and bounds.
  DPM_STATUS_INVALID_ARGUMENT = 2,
  DPM_STATUS_IO = 3,
  DPM_STATUS_NUMERICAL = 4,
  // rldp-fm was given alternatives outside the preprocessing cap.
  DPM_STATUS_NOT_PREPROCESSED = 5,
  DPM_STATUS_PARSE = 6,
  DPM_STATUS_VALIDATION = 7,
  DPM_STATUS_BUFFER_TOO_SMALL = 8,
  DPM_STATUS_INDEX_OUT_OF_RANGE = 9,
  DPM_STATUS_PANIC = 10,
} DpmStatus;

typedef enum DpmMechanism {
  DPM_MECHANISM_VLCP = 0,
  DPM_MECHANISM_VLDP = 1,
  DPM_MECHANISM_RLDP_FM = 2,
} DpmMechanism;

// Per-voter MLE fits.
typedef struct DpmBetas DpmBetas;

// Synthetic or ingested comparisons.
typedef struct DpmCorpus DpmCorpus;

// Released vectors; the aggregate is always the last row.
typedef struct DpmRelease DpmRelease;

// Privacy request. `epsilon` is read for `Uniform`; the five group fields
// for `Personalized`.
typedef struct DpmPrivacy {
  enum DpmPrivacyKind kind;
  double epsilon;
  double f_c;
  double f_m;
  double eps_c;
  double eps_m;
  double eps_l;
} DpmPrivacy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL after a
// success. Valid until the next call into this library on the same thread.
const char *dpm_last_error(void);

struct DpmPrivacy dpm_privacy_none(void);

struct DpmPrivacy dpm_privacy_uniform(double epsilon);

// 54% conservative on [0.01, 0.2], 36% moderate on [0.2, 1], the rest at 1.
struct DpmPrivacy dpm_privacy_personalized_default(void);

// # Safety
// `out` must be valid for writing one pointer.
enum DpmStatus dpm_corpus_generate(size_t n_voters,
                                   size_t n_records,
                                   size_t d,
                                   uint64_t seed,
                                   struct DpmCorpus **out);

// # Safety
// `path` must be a NUL-terminated string; `out` valid for one pointer.
enum DpmStatus dpm_corpus_read_csv(const char *path, struct DpmCorpus **out);

// # Safety
// `corpus` must come from this library; `path` NUL-terminated.
enum DpmStatus dpm_corpus_write_csv(const struct DpmCorpus *corpus, const char *path);

// Clips every alternative to ℓ2 norm 1/2, as rldp-fm requires.
//
// # Safety
// `corpus` must come from this library; `out` valid for one pointer.
enum DpmStatus dpm_corpus_preprocess(const struct DpmCorpus *corpus, struct DpmCorpus **out);

// # Safety
// `corpus` must be NULL or come from this library.
size_t dpm_corpus_num_voters(const struct DpmCorpus *corpus);

// # Safety
// `corpus` must be NULL or come from this library.
size_t dpm_corpus_dim(const struct DpmCorpus *corpus);

// # Safety
// `corpus` must be NULL or come from this library.
bool dpm_corpus_is_preprocessed(const struct DpmCorpus *corpus);

// # Safety
// `corpus` must be NULL or an unfreed handle from this library.
void dpm_corpus_free(struct DpmCorpus *corpus);

// Fits every voter by ℓ1-constrained probit MLE with the default solver.
//
// # Safety
// `corpus` must come from this library; `out` valid for one pointer.
enum DpmStatus dpm_fit(const struct DpmCorpus *corpus, double bound, struct DpmBetas **out);

// # Safety
// `betas` must be NULL or come from this library.
size_t dpm_betas_len(const struct DpmBetas *betas);

// # Safety
// `betas` must be NULL or come from this library.
size_t dpm_betas_dim(const struct DpmBetas *betas);

// Copies voter `index`'s vector into `out[0..dim]`.
//
// # Safety
// `betas` must come from this library; `out` valid for `len` doubles.
enum DpmStatus dpm_betas_get(const struct DpmBetas *betas, size_t index, double *out, size_t len);

// # Safety
// `betas` must come from this library; `out` valid for one value.
enum DpmStatus dpm_betas_voter_id(const struct DpmBetas *betas, size_t index, uint64_t *out);

// # Safety
// `betas` must come from this library; `out` valid for one value.
enum DpmStatus dpm_betas_converged(const struct DpmBetas *betas, size_t index, bool *out);

// Non-private mean of the fits.
//
// # Safety
// `betas` must come from this library; `out` valid for `len` doubles.
enum DpmStatus dpm_betas_mean(const struct DpmBetas *betas, double *out, size_t len);

// # Safety
// `betas` must be NULL or an unfreed handle from this library.
void dpm_betas_free(struct DpmBetas *betas);

// vlcp or vldp over fitted vectors. Noise depends only on `seed`.
//
// # Safety
// `betas` must come from this library; `privacy` must point to a
// `DpmPrivacy`; `out` valid for one pointer.
enum DpmStatus dpm_release_betas(const struct DpmBetas *betas,
                                 enum DpmMechanism mechanism,
                                 const struct DpmPrivacy *privacy,
                                 double bound,
                                 uint64_t seed,
                                 struct DpmRelease **out);

// rldp-fm over a preprocessed corpus.
//
// # Safety
// As [`dpm_release_betas`], with a corpus handle.
enum DpmStatus dpm_release_corpus(const struct DpmCorpus *corpus,
                                  enum DpmMechanism mechanism,
                                  const struct DpmPrivacy *privacy,
                                  double bound,
                                  uint64_t seed,
                                  struct DpmRelease **out);

// Rows in the release, the aggregate included.
//
// # Safety
// `rel` must be NULL or come from this library.
size_t dpm_release_len(const struct DpmRelease *rel);

// # Safety
// `rel` must be NULL or come from this library.
size_t dpm_release_dim(const struct DpmRelease *rel);

// Sensitivity Δ used for the noise scale; NaN for NULL.
//
// # Safety
// `rel` must be NULL or come from this library.
double dpm_release_delta(const struct DpmRelease *rel);

// False for no-noise releases.
//
// # Safety
// `rel` must be NULL or come from this library.
bool dpm_release_is_private(const struct DpmRelease *rel);

// # Safety
// `rel` must come from this library; `out` valid for `len` doubles.
enum DpmStatus dpm_release_row(const struct DpmRelease *rel, size_t index, double *out, size_t len);

// Budget of row `index`; NaN for the aggregate of a distributed release.
//
// # Safety
// `rel` must come from this library; `out` valid for one value.
enum DpmStatus dpm_release_epsilon(const struct DpmRelease *rel, size_t index, double *out);

// The released society vector.
//
// # Safety
// `rel` must come from this library; `out` valid for `len` doubles.
enum DpmStatus dpm_release_mean(const struct DpmRelease *rel, double *out, size_t len);

// # Safety
// `rel` must be NULL or an unfreed handle from this library.
void dpm_release_free(struct DpmRelease *rel);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DPMORAL_H */
