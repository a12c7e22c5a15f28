/* C interface for the bgg-poisson exact verification engine. */

#pragma once

/* Generated with cbindgen:0.29.4 */

/* This header is generated by cbindgen from the Rust sources; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Success.
#define BGP_OK 0

// A pointer argument was NULL.
#define BGP_ERR_NULL -1

// An argument was outside its documented range.
#define BGP_ERR_RANGE -2

// A string argument was not valid UTF-8 or named an unknown id.
#define BGP_ERR_INVALID -3

// An internal panic was caught; the operation had no effect.
#define BGP_ERR_PANIC -4

// Opaque handle to a fixed-dimension model instance.
typedef struct BgpModel BgpModel;

// Version of the underlying engine as a static NUL-terminated string.
// The pointer is valid for the lifetime of the process; do not free it.
const char *bgp_version(void);

// Create a model for boundary dimension `n` (2..=6) and store the handle in
// `*out`.
//
// # Safety
// `out` must be a valid pointer to writable memory for one pointer.
int32_t bgp_model_new(uint32_t n, struct BgpModel **out);

// Release a model handle. Passing NULL is a no-op.
//
// # Safety
// `m` must be NULL or a pointer obtained from [`bgp_model_new`] that has not
// been freed already.
void bgp_model_free(struct BgpModel *m);

// Store the boundary dimension `n` of the model in `*out`.
//
// # Safety
// `m` must be a live handle from [`bgp_model_new`]; `out` must be writable.
int32_t bgp_model_n(const struct BgpModel *m, uint32_t *out);

// Store the dimension of the standard value space (`n + 2`) in `*out`.
//
// # Safety
// `m` must be a live handle from [`bgp_model_new`]; `out` must be writable.
int32_t bgp_model_value_dim(const struct BgpModel *m, uint32_t *out);

// Store the dimension of the symmetry algebra in `*out`.
//
// # Safety
// `m` must be a live handle from [`bgp_model_new`]; `out` must be writable.
int32_t bgp_model_algebra_dim(const struct BgpModel *m, uint32_t *out);

// Serialize the degree-`k` kernel (0 <= k <= n) in the exact text format and
// store a newly-allocated string in `*out`. Free it with [`bgp_string_free`].
//
// # Safety
// `m` must be a live handle from [`bgp_model_new`]; `out` must be writable.
int32_t bgp_kernel_text(const struct BgpModel *m, uint32_t k, char **out);

// Write the chain homology dimensions for degrees `0..=n` into `out`, which
// must have room for `len >= n + 1` entries.
//
// # Safety
// `m` must be a live handle from [`bgp_model_new`]; `out` must point to at
// least `len` writable `uint32_t` slots.
int32_t bgp_homology_dims(const struct BgpModel *m, uint32_t *out, size_t len);

// Run the full check registry at boundary dimension `n` (2..=6). On success,
// store the JSON report in `*out_json` (free with [`bgp_string_free`]) and
// the number of failed checks in `*out_failures`. The return code reports
// whether the run completed, not whether the checks passed.
//
// # Safety
// `out_json` and `out_failures` must be valid writable pointers.
int32_t bgp_verify_json(uint32_t n, char **out_json, uint32_t *out_failures);

// Run a single check (by registry id) at boundary dimension `n`. Behaves
// like [`bgp_verify_json`] restricted to one id; unknown ids yield
// `BGP_ERR_INVALID`.
//
// # Safety
// `check_id` must be a NUL-terminated string; `out_json` and `out_failures`
// must be valid writable pointers.
int32_t bgp_check_json(uint32_t n, const char *check_id, char **out_json, uint32_t *out_failures);

// Release a string allocated by this library. Passing NULL is a no-op.
//
// # Safety
// `s` must be NULL or a pointer previously returned through an out-parameter
// of this library that has not been freed already.
void bgp_string_free(char *s);
