#include <stdio.h>
#include <string.h>

#include "hypertri.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            const char *e = ht_last_error();                          \
            fprintf(stderr, "failed: %s (%s)\n", #cond, e ? e : "");  \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    HtParams *params = NULL;
    CHECK(ht_params_new(9, 2, false, &params) == HT_STATUS_OK);

    HtVertexSet *set = NULL;
    CHECK(ht_construct_antipodal(9, 0, 2, &set) == HT_STATUS_OK);
    CHECK(ht_vertex_set_len(set) == 32);

    bool ok = false;
    uint64_t witness[3] = {0, 0, 0};
    CHECK(ht_check_independent(set, params, &ok, witness) == HT_STATUS_OK);
    CHECK(ok);

    char *report = ht_bound_report_json(params);
    CHECK(report != NULL);
    CHECK(strstr(report, "\"upper_r2\":\"206\"") != NULL);
    ht_string_free(report);

    HtParams *bad = NULL;
    CHECK(ht_params_new(6, 3, false, &bad) == HT_STATUS_INVALID_ARGUMENT);
    CHECK(ht_last_error() != NULL);

    HtParams *small = NULL;
    CHECK(ht_params_new(3, 2, false, &small) == HT_STATUS_OK);
    HtVertexSet *tri = NULL;
    CHECK(ht_vertex_set_parse("110\n101\n011\n", 0, &tri) == HT_STATUS_OK);
    CHECK(ht_check_triangle_free(tri, small, &ok, witness) == HT_STATUS_OK);
    CHECK(!ok);
    CHECK(witness[0] == 3 && witness[1] == 5 && witness[2] == 6);

    size_t best = 0;
    bool optimal = false;
    CHECK(ht_oracle(small, 1000000, 0.0, true, &best, &optimal, NULL) == HT_STATUS_OK);
    CHECK(best == 4 && optimal);

    ht_vertex_set_free(tri);
    ht_vertex_set_free(set);
    ht_params_free(small);
    ht_params_free(params);
    printf("c smoke ok\n");
    return 0;
}
