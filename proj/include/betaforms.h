#ifndef BETAFORMS_H
#define BETAFORMS_H

/* C interface to the betaforms engine: singular-variety form sheaves
 * (torsion-free Kahler forms, integral-closure levels, the stabilized
 * filtration), certificate checking, and numeric cycle integration.
 *
 * Conventions:
 *   - bf_engine is an opaque handle; one engine owns one variety registry.
 *   - Functions returning char* give a heap string owned by the caller; free
 *     it with bf_string_free. NULL means failure; bf_last_error(engine) holds
 *     the message until the next call on the same engine.
 *   - Functions returning int give 0 on success, nonzero on failure.
 *   - Structured results are JSON with a "schema" field.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct bf_engine bf_engine;

bf_engine* bf_engine_new(void);
void bf_engine_free(bf_engine* e);

/* message for the last failed call on this engine */
const char* bf_last_error(const bf_engine* e);

void bf_string_free(char* s);

/* --- varieties ---------------------------------------------------------- */

/* Registers a builtin ("curve35", "S4", "M3", "F5", "line", "plane", or a
 * product id like "S2xC"). */
int bf_variety_builtin(bf_engine* e, const char* name);

/* Loads a .variety file; on success *id_out receives the registered id
 * (free with bf_string_free). */
int bf_variety_load_file(bf_engine* e, const char* path, char** id_out);

int bf_variety_save_file(bf_engine* e, const char* id, const char* path);

/* JSON description of a registered variety. */
char* bf_variety_json(bf_engine* e, const char* id);

/* --- forms -------------------------------------------------------------- */

/* Parses a form expression against a variety and returns the canonical
 * rendering (round-trips through the parser). */
char* bf_parse_form(bf_engine* e, const char* variety, const char* text);

/* --- symbolic engine ----------------------------------------------------- */

/* Classification ladder for a form; cert_json may be NULL. level_cap < 0
 * uses the default q + 2. */
char* bf_classify(bf_engine* e, const char* variety, const char* form,
                  const char* cert_json, int level_cap);

/* Stabilized filtration at degree q: generators and p*. cap < 0 = default. */
char* bf_beta(bf_engine* e, const char* variety, int q, int cap);

/* Generators of one filtration level. */
char* bf_alpha_level(bf_engine* e, const char* variety, int q, int p);

/* Verifies a dependence certificate (JSON text, schema in the docs). */
char* bf_verify_certificate(bf_engine* e, const char* cert_json);

/* Level preservation and wedge/d commutation along a named map
 * ("qk:4", "fermat:4", "pi:3", "slice:3", "sliceqk:3", "id:S4"). */
char* bf_check_pullback(bf_engine* e, const char* map_token, int max_level);

/* Paper reproduction suite. scope: "all", "curve35", "sk", "mk", "fermat",
 * "product". *failures_out (optional) receives the failed-row count. */
char* bf_verify_paper(bf_engine* e, const char* fixtures_dir, const char* scope,
                      int* failures_out);

/* --- numeric integration ------------------------------------------------- */

/* Request JSON shared by the numeric entry points:
 * {
 *   "variety": "S2",
 *   "cycle": "diag" | {inline cycle JSON},
 *   "rho": {"center": [[re,im],...], "radius": 0.8, "class": "C1"},
 *   "u": "x*dy/z", "v": "x*dy/z",
 *   "options": {"n_radial": 48, "n_angular": 96, "eps_min": 1e-6,
 *                "eps_max": 0.1, "eps_count": 10, "tol": 1e-5},
 *   "grid": [0.01, ...],                      (family scan only)
 *   "map": "qk:2", "image_cycle": {...},      (direct image only)
 *   "degree": 2                               (direct image only)
 * }
 */
char* bf_integrate(bf_engine* e, const char* request_json);
char* bf_stokes(bf_engine* e, const char* request_json);
char* bf_family_scan(bf_engine* e, const char* request_json);
char* bf_direct_image(bf_engine* e, const char* request_json);

#ifdef __cplusplus
}
#endif

#endif /* BETAFORMS_H */
