#include <stdio.h>
#include <string.h>

#include "morita.h"

static const char *SPEC =
    "{\"version\": \"1\", \"field\": \"F_5\", \"algebras\": {"
    "\"K\": {\"dim\": 1, \"mul\": [[0, 0, 0, \"1\"]], \"idempotents\": [[\"1\"]]}}}";

int main(void) {
    MoritaWorkspace *w = NULL;
    if (morita_workspace_load(SPEC, &w) != MORITA_STATUS_OK) {
        fprintf(stderr, "load: %s\n", morita_last_error_message());
        return 1;
    }
    char *report = NULL;
    MoritaStatus s = morita_verify(w, "K", &report);
    int ok = s == MORITA_STATUS_OK && strstr(report, "\"pass\": true") != NULL;
    morita_string_free(report);

    size_t dim = 0;
    ok = ok && morita_matrix_ring_dim(w, "K", &dim) == MORITA_STATUS_OK && dim == 1;
    ok = ok && morita_verify(w, "missing", NULL) == MORITA_STATUS_UNRESOLVED_REFERENCE;
    morita_workspace_free(w);

    char *doc = NULL;
    ok = ok && morita_gallery_run("triangular", -1, -1, -1, -1, &doc) == MORITA_STATUS_OK;
    morita_string_free(doc);
    ok = ok && morita_gallery_run("clannish", 7, -1, -1, -1, NULL) == MORITA_STATUS_BAD_PRIME;
    printf("%s %s\n", morita_version(), ok ? "ok" : "FAILED");
    return ok ? 0 : 1;
}
