"""
Configuration Consistency Validator
Validates constraints that span several fields or blocks
"""

from typing import Any, Dict, List

from seqdiff.core.utils.validation_helpers import ValidationUtils


class ConfigConsistencyValidator:
    """Validates cross-field rules on a defaults-resolved configuration"""

    def validate(self, resolved: Dict[str, Any]) -> List[str]:
        """
        Validate cross-field constraints

        Args:
            resolved: Configuration with defaults filled in and types already valid

        Returns:
            List of validation error messages
        """
        errors = []
        errors.extend(self._validate_task(resolved["task"]))
        errors.extend(self._validate_model(resolved["model"]))
        errors.extend(self._validate_mans(resolved["schedules"]["mans"]))
        errors.extend(self._validate_scp(resolved["schedules"]["scp"]))
        errors.extend(
            self._validate_eps(
                resolved["generation"]["eps"], resolved["schedules"]["noise"]
            )
        )
        return errors

    def _validate_task(self, task: Dict[str, Any]) -> List[str]:
        errors = []
        if task["kind"] == "tsv" and not task["path"]:
            errors.append(
                "TASK_PATH_ERROR: task kind 'tsv' needs 'task.path'. "
                "Fix: point it at a 'source<TAB>target' file"
            )
        if task["min_length"] > task["max_length"]:
            errors.append(
                f"TASK_LENGTH_ERROR: min_length {task['min_length']} exceeds "
                f"max_length {task['max_length']}. Fix: swap or adjust the bounds"
            )
        return errors

    def _validate_model(self, model: Dict[str, Any]) -> List[str]:
        if model["d_model"] % model["heads"]:
            return [
                f"MODEL_HEADS_ERROR: d_model {model['d_model']} is not divisible "
                f"by heads {model['heads']}. Fix: pick heads dividing d_model"
            ]
        return []

    def _validate_mans(self, mans: Dict[str, Any]) -> List[str]:
        errors = []
        if mans["preset"] is not None:
            return errors
        if len(mans["milestones"]) != len(mans["scalings"]):
            errors.append(
                f"MANS_TABLE_ERROR: {len(mans['milestones'])} milestones but "
                f"{len(mans['scalings'])} scalings. Fix: give one scaling per milestone"
            )
        if not ValidationUtils.is_strictly_ascending(mans["milestones"]):
            errors.append(
                f"MANS_TABLE_ERROR: milestones {mans['milestones']} are not strictly "
                f"ascending. Fix: sort them and drop duplicates"
            )
        return errors

    def _validate_scp(self, scp: Dict[str, Any]) -> List[str]:
        errors = []
        if scp["lambda_min"] > scp["lambda_max"]:
            errors.append(
                f"SCP_ANCHOR_ERROR: lambda_min {scp['lambda_min']} exceeds "
                f"lambda_max {scp['lambda_max']}. Fix: order the anchors"
            )
        if scp["gamma_min"] > scp["gamma_max"]:
            errors.append(
                f"SCP_ANCHOR_ERROR: gamma_min {scp['gamma_min']} exceeds "
                f"gamma_max {scp['gamma_max']}. Fix: order the anchors"
            )
        return errors

    def _validate_eps(self, eps: float, noise: Dict[str, Any]) -> List[str]:
        if eps < noise["t_floor"]:
            return [
                f"GEN_EPS_ERROR: generation eps {eps} is below the noise schedule's "
                f"t_floor {noise['t_floor']}. Fix: use eps >= t_floor"
            ]
        return []
