import pytest

from modelacq import domains
from modelacq.extract import extract_observer
from modelacq.observation import TokenType, tokenize
from modelacq.pddl import (ArityMismatch, GroundingExplosion, LearnedModel, PDDLSyntaxError,
                           PreconditionViolation, TypeMismatch, UndeclaredObject, UndeclaredPredicate,
                           UndeclaredType, UnsupportedFeature, apply, ground, load_task, parse_domain,
                           parse_problem, reachable_actions, serialize_model)
from modelacq.traces import random_walk

BW_DOMAIN, BW_PROBLEM = domains.texts("blocksworld-4")


def _domain_with(action_body: str, predicates="(p ?x - t) (q ?x - t)") -> str:
    return f"""(define (domain d) (:requirements :strips :typing) (:types t)
      (:predicates {predicates})
      (:action a :parameters (?x - t) {action_body}))"""


def test_bundled_tasks_ground():
    for name in domains.TASKS:
        t = domains.task(name)
        assert t.fluents and t.actions
        assert reachable_actions(t)


def test_blocksworld_counts(blocks):
    # 4 blocks: on 16, ontable 4, clear 4, holding 4, handempty 1
    assert len(blocks.fluents) == 29
    # pick-up/put-down 4 each, stack/unstack 16 each
    assert len(blocks.actions) == 40


def test_apply_follows_strips(blocks):
    s = blocks.init
    i = blocks.action_index["unstack a b"]
    s2 = apply(s, i, blocks)
    names = set(blocks.names_of(s2))
    assert {"holding a", "clear b"} <= names
    assert not {"on a b", "clear a", "handempty"} & names
    with pytest.raises(PreconditionViolation):
        apply(s, blocks.action_index["pick-up c"], blocks)


@pytest.mark.parametrize("text,exc", [
    ("", PDDLSyntaxError),
    ("(define (domain d)", PDDLSyntaxError),
    ("(define (domain d)))", PDDLSyntaxError),
    (_domain_with(":precondition (r ?x) :effect (q ?x)"), UndeclaredPredicate),
    (_domain_with(":precondition (p ?x ?x) :effect (q ?x)"), ArityMismatch),
    (_domain_with(":precondition (p ?y) :effect (q ?x)"), PDDLSyntaxError),
    (_domain_with(":precondition (or (p ?x) (q ?x)) :effect (q ?x)"), UnsupportedFeature),
    (_domain_with(":precondition (forall (?y - t) (p ?y)) :effect (q ?x)"), UnsupportedFeature),
    (_domain_with(":precondition (p ?x) :effect (when (p ?x) (q ?x))"), UnsupportedFeature),
    (_domain_with(":precondition (p ?x) :effect (q ?x)", "(p ?x - u) (q ?x - t)"), UndeclaredType),
    ("(define (domain d) (:requirements :adl))", UnsupportedFeature),
])
def test_domain_errors(text, exc):
    with pytest.raises(exc):
        parse_domain(text)


def test_syntax_error_reports_position():
    with pytest.raises(PDDLSyntaxError) as info:
        parse_domain("(define (domain d)\n  (:predicates (p))\n  )  )")
    assert "3" in str(info.value)


def test_problem_errors():
    d = parse_domain(BW_DOMAIN)
    with pytest.raises(UndeclaredObject):
        parse_problem(BW_PROBLEM.replace("(clear d)", "(clear e)"), d)
    typed = parse_domain(_domain_with(":precondition (p ?x) :effect (q ?x)").replace("(:types t)", "(:types t u)"))
    prob = "(define (problem x) (:domain d) (:objects o - u) (:init (p o)) (:goal (q o)))"
    with pytest.raises(TypeMismatch):
        parse_problem(prob, typed)


def test_grounding_cap():
    with pytest.raises(GroundingExplosion):
        load_task(BW_DOMAIN, BW_PROBLEM, max_actions=10)


def test_learned_model_round_trip_through_pddl(blocks):
    obs = tokenize(random_walk(blocks, 30, 10, seed=4), TokenType.IDENTITY)
    for lift in (True, False):
        m = extract_observer(obs, lift=lift)
        back = LearnedModel.from_domain(parse_domain(serialize_model(m, "bw")))
        assert back.canonical() == m.canonical()


def test_ground_task_is_deterministic():
    a = ground(parse_domain(BW_DOMAIN), parse_problem(BW_PROBLEM, parse_domain(BW_DOMAIN)))
    b = domains.task("blocksworld-4")
    assert [x.label for x in a.actions] == [x.label for x in b.actions]
    assert a.fluent_names == b.fluent_names
