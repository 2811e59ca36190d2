"""
Tests for input schemas and document loading.
"""

import pytest

from lkgeom.adapter.error.error import InputOutputError, ValidationError
from lkgeom.model.schemas import (
    ComplexGermSchema,
    ConeSchema,
    GermSchema,
    PLSetSchema,
    PolytopeSchema,
    ResolutionSchema,
    RunConfig,
)
from lkgeom.service.loader import detect_schema, load_document, load_json, parse
from tests.helpers import write_json


@pytest.mark.unit
class TestSchemas:
    """Strict validation of every document type."""

    def test_vertex_length_checked(self):
        with pytest.raises(ValidationError):
            parse(PolytopeSchema, {"dim": 2, "vertices": [[0, 0, 0]]})

    def test_facet_index_range(self):
        with pytest.raises(ValidationError):
            parse(PolytopeSchema, {"dim": 2, "vertices": [[0, 0], [1, 0]], "facets": [[0, 2]]})

    def test_piece_dimension_must_match(self):
        doc = {"dim": 3, "pieces": [{"dim": 2, "vertices": [[0, 0]]}]}
        with pytest.raises(ValidationError):
            parse(PLSetSchema, doc)

    def test_cone_needs_one_representation(self):
        with pytest.raises(ValidationError):
            parse(ConeSchema, {"generators": [[1, 0]], "normals": [[0, 1]]})
        with pytest.raises(ValidationError):
            parse(ConeSchema, {})

    def test_class_alias(self):
        doc = parse(
            ResolutionSchema,
            {"n": 2, "components": [{"id": "E", "N": 1, "nu": 1}], "strata": [{"I": ["E"], "class": [[0, 1, 1]]}]},
        )
        assert doc.strata[0].klass == [[0, 1, 1]]

    def test_unknown_field_named_in_detail(self, fixtures_dir):
        with pytest.raises(ValidationError) as exc:
            load_document(str(fixtures_dir / "bad" / "node_typo.json"))
        assert exc.value.error_code == "SCHEMA_MISMATCH"
        assert "components.0" in exc.value.detail

    @pytest.mark.parametrize("name", ["square_typo.json", "germ_typo.json", "complex_typo.json"])
    def test_typos_rejected(self, fixtures_dir, name):
        with pytest.raises(ValidationError):
            load_document(str(fixtures_dir / "bad" / name))

    def test_run_config_ranges(self):
        with pytest.raises(Exception):
            RunConfig(command="lk", input_path="a.json", samples=0)
        with pytest.raises(Exception):
            RunConfig(command="zeta", input_path="a.json", mode="padic")
        cfg = RunConfig(command="mlcc-check", input_path="a.json")
        assert cfg.tolerance == 1e-3


@pytest.mark.unit
class TestLoader:
    def test_malformed_json(self, fixtures_dir):
        with pytest.raises(ValidationError) as exc:
            load_json(str(fixtures_dir / "bad" / "malformed.json"))
        assert exc.value.error_code == "MALFORMED_JSON"

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputOutputError):
            load_json(str(tmp_path / "absent.json"))

    def test_wrong_extension(self, tmp_path):
        path = tmp_path / "square.txt"
        path.write_text("{}", encoding="utf-8")
        with pytest.raises(ValidationError) as exc:
            load_json(str(path))
        assert exc.value.error_code == "BAD_EXTENSION"

    @pytest.mark.parametrize(
        "name,schema",
        [
            ("square.json", PLSetSchema),
            ("square_polytope.json", PolytopeSchema),
            ("half_plane.json", GermSchema),
            ("node.json", ResolutionSchema),
            ("cusp_curve.json", ComplexGermSchema),
        ],
    )
    def test_detection(self, fixtures_dir, name, schema):
        doc, _ = load_document(str(fixtures_dir / name))
        assert isinstance(doc, schema)

    def test_unknown_document(self):
        with pytest.raises(ValidationError):
            detect_schema({"hello": 1})
        with pytest.raises(ValidationError):
            detect_schema([1, 2])

    def test_single_polytope_where_a_set_is_expected(self, fixtures_dir):
        _, X = load_document(str(fixtures_dir / "square_polytope.json"), PLSetSchema)
        assert len(X.pieces) == 1
        assert X.pieces[0].volume == pytest.approx(1.0)

    def test_empty_set(self, tmp_path):
        path = write_json(tmp_path, "empty.json", {"dim": 2, "pieces": []})
        _, X = load_document(path)
        assert X.is_empty

    def test_germ_with_normals_and_multiplicity(self, tmp_path):
        path = write_json(
            tmp_path,
            "germ.json",
            {"dim": 2, "cones": [{"normals": [[-1, 0], [0, -1]], "mult": 2}]},
        )
        _, X0 = load_document(path)
        assert X0.pieces[0][1] == 2
        assert X0.cones[0].solid_fraction()[0] == pytest.approx(0.25)

    def test_cone_dimension_mismatch(self, tmp_path):
        path = write_json(tmp_path, "germ.json", {"dim": 2, "cones": [{"dim": 3, "generators": [[1, 0, 0]]}]})
        with pytest.raises(ValidationError):
            load_document(path)

    def test_complex_germ(self, fixtures_dir):
        _, data = load_document(str(fixtures_dir / "a1_surface.json"))
        assert data.mu_sequence == (1, 1, 1, 1)
        assert data.stratum("S").dim == 2

    def test_resolution_classes(self, fixtures_dir):
        _, res = load_document(str(fixtures_dir / "xy_real.json"))
        assert set(res.strata[0].signed) == {"+1", "-1", ">", "<"}
