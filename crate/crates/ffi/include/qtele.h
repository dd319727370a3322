#ifndef QTELE_H
#define QTELE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define QT_CORRECTION_STANDARD 0

#define QT_CORRECTION_ZETA_LISTING 1

typedef enum QtStatus {
  QT_STATUS_OK = 0,
  QT_STATUS_NULL_POINTER = 1,
  /**
   * A parameter is outside its admissible range.
   */
  QT_STATUS_DOMAIN = 2,
  /**
   * Input violates a numerical contract (normalization, hermiticity, ...).
   */
  QT_STATUS_CONTRACT = 3,
  QT_STATUS_DEGENERATE_BRANCH = 4,
  /**
   * Unknown enum code or malformed argument.
   */
  QT_STATUS_INVALID_ARGUMENT = 5,
  QT_STATUS_INTERNAL = 6,
} QtStatus;

/**
 * Opaque handle to an evaluated teleportation configuration.
 */
typedef struct QtTeleporter QtTeleporter;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qt_last_error_message(void);

/**
 * CHSH expectation of a two-qubit pure state under the canonical setting
 * `A = (σx+σz)/√2, A' = (σx−σz)/√2, B = σx, B' = σz`.
 *
 * # Safety
 * `amplitudes` must point to 8 doubles: `re0, im0, re1, im1, ..., re3, im3`.
 * `out` must be valid for one write.
 */
enum QtStatus qt_chsh_expectation(const double *amplitudes, bool flip_b, double *out);

/**
 * `cos⁴(θ/2) + sin⁴(θ/2) + αβ sin²θ`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum QtStatus qt_closed_form_fidelity(double theta, double phi, double alpha, double *out);

/**
 * Evaluates all four protocol branches for one configuration.
 * `correction` is `QT_CORRECTION_STANDARD` or `QT_CORRECTION_ZETA_LISTING`.
 *
 * # Safety
 * `out` must be valid for one write. On success `*out` owns a handle that
 * must be released with `qt_teleporter_free`.
 */
enum QtStatus qt_teleporter_new(double theta,
                                double phi,
                                double alpha,
                                uint32_t correction,
                                struct QtTeleporter **out);

/**
 * # Safety
 * `handle` must be NULL or a pointer from `qt_teleporter_new` not yet freed.
 */
void qt_teleporter_free(struct QtTeleporter *handle);

/**
 * # Safety
 * `handle` must be a live handle; `out` must be valid for one write.
 */
enum QtStatus qt_teleporter_average_fidelity(const struct QtTeleporter *handle, double *out);

/**
 * Born probabilities in φ⁺, φ⁻, ψ⁺, ψ⁻ order (message bits 00, 01, 10, 11).
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid for 4 writes.
 */
enum QtStatus qt_teleporter_branch_probabilities(const struct QtTeleporter *handle, double *out);

/**
 * Receiver's corrected qubit for message `bits` (0..=3) as `re0, im0, re1, im1`.
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid for 4 writes.
 */
enum QtStatus qt_teleporter_corrected_state(const struct QtTeleporter *handle,
                                            uint32_t bits,
                                            double *out);

/**
 * Seeded Monte Carlo estimate of the average fidelity. Deterministic in
 * `(seed, shots)`.
 *
 * # Safety
 * `handle` must be a live handle; `out_mean` and `out_stderr` must be valid
 * for one write each.
 */
enum QtStatus qt_teleporter_monte_carlo(const struct QtTeleporter *handle,
                                        uint64_t shots,
                                        uint64_t seed,
                                        double *out_mean,
                                        double *out_stderr);

/**
 * Transcript JSON (the `qtele teleport` shape without the Monte Carlo
 * block). Returns NULL on failure; free the result with `qt_string_free`.
 *
 * # Safety
 * `handle` must be a live handle.
 */
char *qt_teleporter_transcript_json(const struct QtTeleporter *handle);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void qt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QTELE_H */
