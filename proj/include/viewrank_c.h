/* C API for the viewrank influence-measurement engine.
 *
 * All functions return VR_OK (0) on success or a negative error code; the
 * message for the most recent failure on the calling thread is available via
 * vr_last_error(). Handle-returning functions return NULL on failure.
 */
#ifndef VIEWRANK_C_H
#define VIEWRANK_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define VR_OK 0
#define VR_ERR_IO (-1)
#define VR_ERR_DATA (-2)
#define VR_ERR_CONFIG (-3)
#define VR_ERR_INTERNAL (-4)

typedef struct vr_dataset vr_dataset;
typedef struct vr_model vr_model;

const char* vr_version(void);

/* Thread-local message for the most recent error; empty string if none. */
const char* vr_last_error(void);

/* Generate a seeded synthetic dataset. config_json may be NULL or "{}" for
 * defaults; recognized keys mirror the generator configuration (n_users,
 * seed, posts_min, posts_max, log_views_mu, log_views_sigma, ...). Writes
 * posts.jsonl, users.csv, edges.csv and ground_truth.csv into out_dir. */
int vr_synth_generate(const char* config_json, const char* out_dir, const char* command);

/* Parse posts (format "jsonl" or "csv") and users files, apply the minimum
 * post filter and outlier removal, compute influence. */
vr_dataset* vr_dataset_ingest(const char* posts_path, const char* format,
                              const char* users_path, int min_posts, double z_threshold);
void vr_dataset_free(vr_dataset* dataset);
int vr_dataset_user_count(const vr_dataset* dataset);

int vr_dataset_write_aggregates(const vr_dataset* dataset, const char* path,
                                const char* command, uint64_t seed);
int vr_dataset_write_features(const vr_dataset* dataset, const char* path,
                              const char* command, uint64_t seed);

/* Train one model. options_json keys: kind ("ridge"|"forest"), multi (bool),
 * k_clusters, alpha, transform_scales, log_target, rfe_target, seed, threads,
 * n_trees, min_samples_leaf, max_features_per_split, bootstrap. */
vr_model* vr_model_train(const vr_dataset* dataset, const char* options_json);
vr_model* vr_model_load(const char* path);
int vr_model_save(const vr_model* model, const char* path);
void vr_model_free(vr_model* model);

/* Predict for every row of a feature CSV and write the ranking CSV
 * (rank,user_id,predicted_influence; descending, ties by user_id). */
int vr_model_rank(const vr_model* model, const char* features_csv, const char* out_csv,
                  const char* command, uint64_t seed);

/* Run the six-configuration benchmark and write the report as JSON and as an
 * aligned text table. */
int vr_eval_run(const vr_dataset* dataset, uint64_t seed, int threads,
                const char* out_json, const char* out_text, const char* command);

/* Weighted PageRank over an edge CSV (source,target,weight). Scores CSV is
 * always written; when influence_csv is non-NULL the Spearman correlation
 * between scores and influence is stored in *rs_out. */
int vr_pagerank_run(const char* edges_csv, const char* influence_csv, const char* out_scores_csv,
                    double damping, const char* command, uint64_t seed, double* rs_out);

#ifdef __cplusplus
}
#endif

#endif /* VIEWRANK_C_H */
