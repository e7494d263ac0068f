import pytest

from botbrain.bt import Executor, TickStatus, default_registry
from botbrain.qa import (
    CANNOT_ANSWER,
    GripperView,
    OutcomeContext,
    RobotSensors,
    TaskRecord,
    answer_remote,
    answer_template,
    assemble_context,
    validate_context_xml,
)
from botbrain.strategy import Command, NetworkError, OracleBackend, TaskSpec, TaskType
from botbrain.world import default_scenario


def sample_context(statuses=("Success", "Failure"), score=7):
    tasks = [
        TaskRecord(
            uid=f"task0_CollectCake",
            name="CollectCake",
            params={"color": "pink", "x_mm": 1200, "y_mm": 600},
            status=statuses[0],
            detail="failed at GrabCake" if statuses[0] == "Failure" else "",
        ),
        TaskRecord(
            uid="task1_ReturnToBase",
            name="ReturnToBase",
            params={},
            status=statuses[1],
            detail="failed at MoveTo" if statuses[1] == "Failure" else "",
        ),
    ]
    robot = RobotSensors(
        robot_id="r1",
        x_mm=1200.0,
        y_mm=600.0,
        theta_rad=0.3,
        grippers=[GripperView(layers=["pink", "pink"]), None, None],
        cherries_held=4,
    )
    return OutcomeContext(match_time_s=42.5, tasks=tasks, robot=robot, score_forecast=score)


def collect_and_return_cmd():
    return Command(
        text="collect the pink cake and return to base",
        tasks=(
            TaskSpec(TaskType.COLLECT_CAKE, {"color": "pink", "x_mm": 1200, "y_mm": 600}),
            TaskSpec(TaskType.RETURN_TO_BASE),
        ),
    )


class TestContextXml:
    def test_round_trip(self):
        context = sample_context()
        again = OutcomeContext.from_xml(context.to_xml())
        assert again == context

    def test_byte_identical_serialization(self):
        context = sample_context()
        assert context.to_xml() == OutcomeContext.from_xml(context.to_xml()).to_xml()

    def test_validates_against_schema(self):
        assert validate_context_xml(sample_context().to_xml()) == []

    def test_schema_rejects_garbage(self):
        assert validate_context_xml("<wat/>") != []
        assert validate_context_xml("not xml at all") != []

    def test_bad_status_rejected(self):
        with pytest.raises(Exception):
            TaskRecord(uid="task0_X", name="X", params={}, status="Exploded")


class TestAssembleContext:
    def _executed_context(self, handlers=None, ticks=0):
        cmd = collect_and_return_cmd()
        tree = OracleBackend().generate(cmd, default_registry())
        scenario = default_scenario()
        world = scenario.world
        robot = world.robot("r1")
        base_handlers = {
            "MoveTo": lambda p: TickStatus.SUCCESS,
            "PathClear": lambda p: True,
            "Wait": lambda p: TickStatus.SUCCESS,
            "GrabCake": lambda p: TickStatus.SUCCESS,
            "ReturnToBase": lambda p: TickStatus.SUCCESS,
        }
        base_handlers.update(handlers or {})
        executor = Executor(tree, base_handlers, clock=lambda: world.t_ms)
        for _ in range(ticks):
            executor.tick()
        return assemble_context(tree, executor.trace, robot, world), tree

    def test_no_ticks_all_not_run(self):
        context, _ = self._executed_context(ticks=0)
        assert [t.status for t in context.tasks] == ["NotRun", "NotRun"]

    def test_failure_names_failing_leaf(self):
        context, _ = self._executed_context(
            handlers={"GrabCake": lambda p: TickStatus.FAILURE}, ticks=1
        )
        assert context.tasks[0].status == "Failure"
        assert "GrabCake" in context.tasks[0].detail
        assert context.tasks[1].status == "NotRun"

    def test_all_success(self):
        context, _ = self._executed_context(ticks=1)
        assert [t.status for t in context.tasks] == ["Success", "Success"]

    def test_running_task_detected(self):
        context, _ = self._executed_context(
            handlers={"GrabCake": lambda p: TickStatus.RUNNING}, ticks=1
        )
        assert context.tasks[0].status == "Running"

    def test_reassembly_is_byte_identical(self):
        context_a, tree = self._executed_context(ticks=1)
        context_b, _ = self._executed_context(ticks=1)
        assert context_a.to_xml() == context_b.to_xml()

    def test_output_validates(self):
        context, _ = self._executed_context(ticks=1)
        assert validate_context_xml(context.to_xml()) == []


class TestAnswerTemplate:
    def test_score_question(self):
        answer = answer_template(sample_context(score=7), "what is the score?")
        assert "7" in answer.text
        assert answer.supporting_fields == ["scoreForecast"]

    def test_task_failure_names_step(self):
        context = sample_context(statuses=("Failure", "NotRun"))
        answer = answer_template(context, "did the cake collection succeed?")
        assert answer.text.startswith("No")
        assert "GrabCake" in answer.text
        assert answer.supporting_fields == ["tasks.task0_CollectCake.status"]

    def test_task_success(self):
        answer = answer_template(sample_context(), "did the robot collect the cake?")
        assert answer.text.startswith("Yes")

    def test_unknown_intent(self):
        answer = answer_template(sample_context(), "what is the meaning of life?")
        assert answer.text == CANNOT_ANSWER
        assert answer.supporting_fields == []

    def test_position_question(self):
        answer = answer_template(sample_context(), "where is the robot?")
        assert "1200" in answer.text
        assert answer.supporting_fields == ["robot.pose"]

    def test_held_question(self):
        answer = answer_template(sample_context(), "what is the robot holding?")
        assert "pink" in answer.text and "4 cherries" in answer.text

    def test_failures_intent(self):
        context = sample_context(statuses=("Success", "Failure"))
        answer = answer_template(context, "did anything fail?")
        assert "ReturnToBase" in answer.text

    def test_no_failures(self):
        answer = answer_template(sample_context(statuses=("Success", "Success")), "any problem?")
        assert "No task has failed" in answer.text

    def test_pure_function_of_inputs(self):
        context = sample_context()
        a = answer_template(context, "what is the score?")
        b = answer_template(context, "what is the score?")
        assert a == b


class TestAnswerRemote:
    def test_echo_stub(self, stub_server):
        url, routes = stub_server
        routes["/answer"] = lambda body: (200, {"text": "All tasks went fine."})
        answer = answer_remote(sample_context(), "how did it go?", url)
        assert answer.text == "All tasks went fine."
        assert answer.supporting_fields == []

    def test_context_and_question_posted(self, stub_server):
        url, routes = stub_server
        seen = {}

        def handler(body):
            seen.update(body)
            return 200, {"text": "ok"}

        routes["/answer"] = handler
        answer_remote(sample_context(), "score?", url)
        assert "<outcome" in seen["contextXml"]
        assert seen["question"] == "score?"

    def test_unreachable_endpoint(self):
        with pytest.raises(NetworkError):
            answer_remote(sample_context(), "score?", "http://127.0.0.1:1", timeout_s=0.5)

    def test_empty_body_is_error_not_empty_answer(self, stub_server):
        url, routes = stub_server
        routes["/answer"] = lambda body: (200, {"text": "  "})
        with pytest.raises(NetworkError):
            answer_remote(sample_context(), "score?", url)
