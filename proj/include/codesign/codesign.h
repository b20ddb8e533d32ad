#ifndef CODESIGN_CODESIGN_H
#define CODESIGN_CODESIGN_H

#include <stdint.h>

#if defined(CODESIGN_BUILDING_LIBRARY)
#define CDS_API __attribute__((visibility("default")))
#else
#define CDS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returns a status; on failure cds_last_error_message()
 * describes the error for the calling thread. Strings returned through
 * char** are heap allocated and must be released with cds_free_string. */

typedef enum cds_status {
    CDS_OK = 0,
    CDS_INVALID_ARGUMENT = 1,
    CDS_CONFIG = 2,
    CDS_SYNTHESIS = 3,
    CDS_NUMERICAL = 4,
    CDS_IO = 5,
    CDS_PARTIAL = 6, /* suite finished but some rows recorded errors */
    CDS_INTERNAL = 7
} cds_status;

typedef struct cds_topology cds_topology;
typedef struct cds_circuit cds_circuit;

typedef struct cds_topology_stats {
    int num_qubits;
    int num_edges;
    int diameter;
    double avg_distance;          /* mean over all n^2 ordered pairs */
    double avg_connectivity;
    double avg_distance_distinct; /* mean over n(n-1) distinct pairs */
} cds_topology_stats;

typedef struct cds_metrics {
    int total_2q;
    int critical_2q;
    int total_swaps;
    int critical_swaps;
    double weighted_duration;
    double total_duration;
} cds_metrics;

enum { CDS_SWAP_WEIGHTED = 0, CDS_SWAP_ON_2Q_CRITICAL = 1 };

typedef struct cds_transpile_options {
    const char* basis;          /* "cnot", "sqiswap", "iswap", "syc", "root:N" */
    uint64_t seed;              /* routing seed */
    int trials;
    const char* durations_json; /* NULL for defaults */
    double f_iswap;
    int synthesize;             /* nonzero: emit synthesized local gates */
    int peephole;
    int swap_mode;
} cds_transpile_options;

typedef struct cds_transpile_result {
    cds_metrics metrics;
    double decomp_fidelity;
    double modeled_fidelity;
    int num_blocks;
} cds_transpile_result;

typedef struct cds_suite_summary {
    int executed;
    int skipped;
    int failed;
} cds_suite_summary;

typedef struct cds_fig9_options {
    int n_samples;
    const double* f_iswap;
    int num_f_iswap;
    const int* roots;
    int num_roots;
    int k_max;
    uint64_t seed;
    int restarts;
    int threads; /* 0: CODESIGN_THREADS or hardware concurrency */
} cds_fig9_options;

CDS_API const char* cds_version(void);
CDS_API const char* cds_last_error_message(void);
CDS_API void cds_free_string(char* s);

CDS_API cds_status cds_topology_create(const char* spec, cds_topology** out);
CDS_API cds_status cds_topology_from_edge_list(const char* text, cds_topology** out);
CDS_API void cds_topology_free(cds_topology* t);
CDS_API cds_status cds_topology_stats_get(const cds_topology* t, cds_topology_stats* out);
CDS_API cds_status cds_topology_edge_list(const cds_topology* t, char** out);

CDS_API cds_status cds_benchmark_generate(const char* family, int width, uint64_t seed, int trotter_steps,
                                          int qaoa_layers, cds_circuit** out);
CDS_API cds_status cds_circuit_from_text(const char* text, cds_circuit** out);
CDS_API cds_status cds_circuit_to_text(const cds_circuit* c, char** out);
CDS_API void cds_circuit_free(cds_circuit* c);
CDS_API cds_status cds_circuit_width(const cds_circuit* c, int* out);
CDS_API cds_status cds_circuit_metrics(const cds_circuit* c, const char* durations_json, cds_metrics* out);

CDS_API void cds_transpile_options_init(cds_transpile_options* opt);
/* out_circuit may be NULL; otherwise receives the translated physical circuit. */
CDS_API cds_status cds_transpile(const cds_circuit* c, const cds_topology* t, const cds_transpile_options* opt,
                                 cds_transpile_result* out, cds_circuit** out_circuit);

/* output_prefix overrides the config's "output" when non-NULL.
 * Returns CDS_PARTIAL when any row failed. */
CDS_API cds_status cds_suite_run(const char* config_json, const char* output_prefix, cds_suite_summary* out);
/* Reads a JSON-lines results file; writes plot CSVs into plot_dir when non-NULL. */
CDS_API cds_status cds_suite_report(const char* jsonl_path, const char* plot_dir, char** tables_out);

CDS_API void cds_fig9_options_init(cds_fig9_options* opt);
CDS_API cds_status cds_fig9(const cds_fig9_options* opt, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif
