//! Ordering property of list schedules: a task later in the list never
//! starts before the busy segment holding any earlier task.

use std::collections::HashMap;

use crate::model::{Schedule, TaskRef};

/// Start of the maximal gap-free run of tasks on the same machine that
/// contains each placed task.
pub fn segment_starts(s: &Schedule) -> HashMap<TaskRef, f64> {
    let mut out = HashMap::with_capacity(s.placed.len());
    for machine in 0..s.machines {
        let mut seg_start = 0.0;
        let mut prev_end: Option<f64> = None;
        for pt in s.on_machine(machine) {
            if prev_end.is_none_or(|e| pt.start > e) {
                seg_start = pt.start;
            }
            prev_end = Some(pt.end);
            out.insert(pt.task.key(), seg_start);
        }
    }
    out
}

/// True iff for every `o1` before `o2` in `list_order`, `o2` starts no
/// earlier than the segment containing `o1`.
pub fn check_gong_property(s: &Schedule, list_order: &[TaskRef]) -> bool {
    let seg = segment_starts(s);
    let tol = s.instance.tolerance();
    let mut later_min = f64::INFINITY;
    for task in list_order.iter().rev() {
        let (Some(placed), Some(&seg_start)) = (s.find(*task), seg.get(task)) else {
            return false;
        };
        if later_min < seg_start - tol {
            return false;
        }
        later_min = later_min.min(placed.start);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_random_instance, GenConfig};
    use crate::model::{Instance, Job, PlacedTask, Task, TaskKind};
    use crate::online::{run_pcp, run_pcp_parallel, AlgoParams};

    #[test]
    fn single_machine_queue_order() {
        for seed in 0..100 {
            let inst = gen_random_instance(&GenConfig::new(6, 3.0, seed)).unwrap();
            let s = run_pcp(&inst, &AlgoParams::pcp_optimal()).unwrap();
            let order: Vec<TaskRef> = s.placed.iter().map(|p| p.task.key()).collect();
            assert!(check_gong_property(&s, &order));
        }
    }

    #[test]
    fn parallel_list_orders() {
        for seed in 0..300 {
            let mut cfg = GenConfig::new(2 + seed as usize % 9, 3.0, seed);
            cfg.r_max = [1.5, 3.0, 6.0][seed as usize % 3];
            let inst = gen_random_instance(&cfg).unwrap();
            for m in 2..=4 {
                let s = run_pcp_parallel(&inst, m, &AlgoParams::pcp_optimal()).unwrap();
                let order = s.list_order.clone().unwrap();
                assert!(check_gong_property(&s, &order), "seed {seed} m {m}");
            }
        }
    }

    #[test]
    fn hand_built_violation() {
        // o1 (job 0) is first in the list but runs after an idle gap, while
        // o2 (job 1) starts at 0 on another machine
        let inst = Instance::with_machines(
            vec![Job::new(0, 5.0, 1.0, 0.0), Job::new(1, 5.0, 1.0, 0.0)],
            2,
        )
        .unwrap();
        let place = |job: &Job, machine, start: f64| PlacedTask {
            task: Task::untested(job),
            machine,
            start,
            end: start + job.upper_limit,
        };
        let placed = vec![place(&inst.jobs[1], 1, 0.0), place(&inst.jobs[0], 0, 2.0)];
        let s = Schedule::from_placed(&inst, 2, placed).unwrap();
        let key = |job| TaskRef {
            job,
            kind: TaskKind::ExecUntested,
        };
        assert!(!check_gong_property(&s, &[key(0), key(1)]));
        assert!(check_gong_property(&s, &[key(1), key(0)]));
    }
}
